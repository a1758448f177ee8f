// qsl: quantum speed limits for unitarily driven finite-level systems.
//
// Subcommands:
//   bounds      propagate a run and report every applicable speed limit
//   geodesic    geodesic shooting between isospectral states, with the
//               synthesized optimal Hamiltonian
//   figure-gap  gap between geodesic distance and Bures angle for qubit
//               spectra, as CSV
//   validate    seeded invariant batteries

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>

#include <CLI11.hpp>

#include "qsl/distance.hpp"
#include "qsl/serialize.hpp"
#include "qsl/validate.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInvariant = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  std::optional<double> hbar;
  std::optional<double> tol;
  std::string csv_path;
  bool json = false;  // JSON is the default output for bounds/geodesic anyway
};

void add_common_flags(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON run configuration");
  cmd->add_option("--seed", opts.seed, "Random seed override");
  cmd->add_option("--steps", opts.steps, "Grid size override");
  cmd->add_option("--hbar", opts.hbar, "Planck constant override");
  cmd->add_option("--tol", opts.tol, "Tolerance override");
  cmd->add_option("--csv", opts.csv_path, "CSV output path");
  cmd->add_flag("--json", opts.json, "Emit JSON on stdout");
}

qsl::Json load_config(const CommonOptions& opts) {
  if (opts.config_path.empty()) return qsl::Json::object();
  std::ifstream in(opts.config_path);
  if (!in) throw ConfigError("config: cannot open " + opts.config_path);
  qsl::Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return j;
}

double get_or(const qsl::Json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

// Resolved run: driving curve, initial state, and the run parameters.
struct ResolvedRun {
  qsl::HamiltonianCurve h;
  qsl::DensityMatrix rho0;
  double hbar;
  double tol;
  std::uint64_t seed;
  int steps;
};

ResolvedRun resolve_bounds_config(const qsl::Json& cfg, const CommonOptions& common) {
  const double hbar = common.hbar.value_or(get_or(cfg, "hbar", 1.0));
  const double tol = common.tol.value_or(get_or(cfg, "tol", 1e-6));
  const std::uint64_t seed = common.seed.value_or(
      cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : 7u);
  const int steps = common.steps.value_or(
      cfg.contains("steps") ? cfg.at("steps").get<int>() : 1000);
  if (hbar <= 0) throw ConfigError("config: hbar must be positive");
  if (steps < 2) throw ConfigError("config: steps must be at least 2");

  const std::string builtin =
      cfg.contains("builtin") ? cfg.at("builtin").get<std::string>() : "";

  if (builtin == "qubit_example") {
    const qsl::Json q = cfg.contains("qubit") ? cfg.at("qubit") : qsl::Json::object();
    const double p1 = get_or(q, "p1", 2.0 / 3.0);
    const double p2 = get_or(q, "p2", 1.0 / 3.0);
    const double a = get_or(q, "a", 1.0);
    const double theta = get_or(q, "theta", 0.0);
    const double tau = get_or(cfg, "tau", kPi / 4.0);
    if (!(p1 > p2 && p2 > 0) || std::abs(p1 + p2 - 1.0) > 1e-10)
      throw ConfigError("config: qubit_example needs p1 > p2 > 0, p1 + p2 = 1");
    if (a <= 0 || tau <= 0) throw ConfigError("config: qubit_example needs a, tau > 0");
    qsl::Matrix xi(2, 2);
    xi << 0.0, a * std::exp(qsl::Complex(0, theta)),
        -a * std::exp(qsl::Complex(0, -theta)), 0.0;
    const qsl::HermitianMatrix h_const(qsl::Complex(0, hbar) * xi);
    qsl::Matrix rho(2, 2);
    rho << p1, 0, 0, p2;
    return ResolvedRun{qsl::HamiltonianCurve::constant(h_const, tau, steps + 1),
                       qsl::DensityMatrix(rho), hbar, tol, seed, steps};
  }

  if (builtin == "swap4") {
    const qsl::Json s = cfg.contains("swap") ? cfg.at("swap") : qsl::Json::object();
    const double e = get_or(s, "E", 1.0);
    if (e <= 0) throw ConfigError("config: swap4 needs E > 0");
    const double tau = get_or(cfg, "tau", kPi * hbar / (2.0 * e));
    if (tau <= 0) throw ConfigError("config: tau must be positive");
    qsl::Matrix h = qsl::Matrix::Zero(4, 4);
    h(0, 2) = h(2, 0) = e;
    h(1, 3) = h(3, 1) = e;
    qsl::Matrix rho = qsl::Matrix::Zero(4, 4);
    rho(0, 0) = rho(1, 1) = 0.5;
    return ResolvedRun{
        qsl::HamiltonianCurve::constant(qsl::HermitianMatrix(h), tau, steps + 1),
        qsl::DensityMatrix(rho), hbar, tol, seed, steps};
  }

  if (!builtin.empty())
    throw ConfigError("config: unknown builtin \"" + builtin + "\"");

  if (!cfg.contains("hamiltonian"))
    throw ConfigError("config: need \"builtin\" or an inline \"hamiltonian\"");
  qsl::HamiltonianCurve h = [&] {
    try {
      return qsl::hamiltonian_from_json(cfg.at("hamiltonian"));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config: hamiltonian: ") + e.what());
    }
  }();
  if (h.nodes() != steps + 1) h = h.resampled(steps + 1);

  std::optional<qsl::DensityMatrix> rho0;
  try {
    if (cfg.contains("rho0")) {
      rho0.emplace(qsl::density_from_json(cfg.at("rho0")));
    } else if (cfg.contains("spectrum")) {
      const qsl::Spectrum sigma = qsl::spectrum_from_json(cfg.at("spectrum"));
      const int n = cfg.contains("dimension") ? cfg.at("dimension").get<int>()
                                              : sigma.rank();
      rho0.emplace(qsl::random_density(sigma, n, seed));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: rho0: ") + e.what());
  }
  if (!rho0) throw ConfigError("config: need \"rho0\" or \"spectrum\"");
  if (rho0->dim() != h.dim())
    throw ConfigError("config: rho0 and hamiltonian dimensions differ");
  return ResolvedRun{std::move(h), std::move(*rho0), hbar, tol, seed, steps};
}

qsl::ShootOptions shoot_options(const ResolvedRun& run) {
  qsl::ShootOptions opts;
  opts.tol = run.tol;
  opts.seed = run.seed;
  opts.hbar = run.hbar;
  opts.steps = std::max(256, std::min(run.steps, 2000));
  return opts;
}

void append_csv_row(const std::string& path, const std::string& header,
                    const std::string& row) {
  const bool fresh = !std::ifstream(path).good();
  std::ofstream out(path, std::ios::app);
  if (!out) throw ConfigError("config: cannot open CSV path " + path);
  if (fresh) out << header << '\n';
  out << row << '\n';
}

int cmd_bounds(const CommonOptions& common) {
  const qsl::Json cfg = load_config(common);
  const ResolvedRun resolved = resolve_bounds_config(cfg, common);

  const qsl::EvolutionRun run =
      qsl::make_run(resolved.h, resolved.rho0, resolved.hbar);
  const qsl::DistanceInfo dist = qsl::compute_distance(
      resolved.rho0, run.rtraj.rho.back(), shoot_options(resolved));
  const qsl::BoundsReport rep = qsl::build_report(run, dist);

  std::cout << qsl::report_to_json(rep).dump(2) << '\n';
  if (!common.csv_path.empty())
    append_csv_row(common.csv_path, qsl::report_csv_header(),
                   qsl::report_csv_row(rep));
  return kExitOk;
}

int cmd_geodesic(const CommonOptions& common) {
  const qsl::Json cfg = load_config(common);
  const double hbar = common.hbar.value_or(get_or(cfg, "hbar", 1.0));
  const double tol = common.tol.value_or(get_or(cfg, "tol", 1e-6));
  const std::uint64_t seed = common.seed.value_or(
      cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : 7u);

  std::optional<qsl::DensityMatrix> rho0, rho1;
  try {
    if (cfg.contains("builtin") && cfg.at("builtin") == "qubit_example") {
      const qsl::Json q =
          cfg.contains("qubit") ? cfg.at("qubit") : qsl::Json::object();
      const double p1 = get_or(q, "p1", 2.0 / 3.0);
      const double p2 = get_or(q, "p2", 1.0 / 3.0);
      const double a = get_or(q, "a", 1.0);
      const double theta = get_or(q, "theta", 0.0);
      const double tau = get_or(cfg, "tau", kPi / 4.0);
      qsl::Matrix xi(2, 2);
      xi << 0.0, a * std::exp(qsl::Complex(0, theta)),
          -a * std::exp(qsl::Complex(0, -theta)), 0.0;
      const qsl::TwoEigenvaluePoint pt = qsl::two_eigenvalue_geodesic(
          p1, p2, 1, 1, qsl::AntiHermitianMatrix(xi), tau);
      qsl::Matrix rho(2, 2);
      rho << p1, 0, 0, p2;
      rho0.emplace(rho);
      rho1 = pt.rho;
    } else {
      if (!cfg.contains("rho0") || !cfg.contains("rho1"))
        throw ConfigError("config: geodesic needs \"rho0\" and \"rho1\"");
      rho0.emplace(qsl::density_from_json(cfg.at("rho0")));
      rho1.emplace(qsl::density_from_json(cfg.at("rho1")));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  qsl::ShootOptions opts;
  opts.tol = tol;
  opts.seed = seed;
  opts.hbar = hbar;
  if (common.steps) opts.steps = std::max(*common.steps, opts.search_steps);
  if (cfg.contains("starts")) opts.starts = cfg.at("starts").get<int>();

  const qsl::OptimalHamiltonian opt = qsl::optimal_hamiltonian(*rho0, *rho1, opts);

  std::string csv_ref;
  if (!common.csv_path.empty()) {
    std::ofstream out(common.csv_path);
    if (!out) throw ConfigError("config: cannot open CSV path " + common.csv_path);
    qsl::write_trajectory_csv(out, opt.geodesic.curve);
    csv_ref = common.csv_path;
  }

  qsl::Json j = qsl::geodesic_to_json(opt.geodesic, csv_ref);
  j["optimal_hamiltonian"] = qsl::Json{
      {"saturation_rel", opt.saturation_rel},
      {"xi_perp_max", opt.xi_perp_max},
      {"curve", qsl::hamiltonian_to_json(opt.h)},
  };
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_figure_gap(const CommonOptions& common, int samples) {
  const qsl::Json cfg = load_config(common);
  std::vector<std::pair<double, double>> spectra = {
      {2.0 / 3.0, 1.0 / 3.0}, {3.0 / 4.0, 1.0 / 4.0}, {7.0 / 8.0, 1.0 / 8.0}};
  if (cfg.contains("spectra")) {
    spectra.clear();
    for (const qsl::Json& s : cfg.at("spectra")) {
      const double p1 = s.at(0).get<double>();
      const double p2 = s.at(1).get<double>();
      spectra.emplace_back(p1, p2);
    }
  }
  if (cfg.contains("samples")) samples = cfg.at("samples").get<int>();
  if (samples < 1) throw ConfigError("config: samples must be positive");
  for (const auto& [p1, p2] : spectra)
    if (!(p1 > p2 && p2 > 0) || std::abs(p1 + p2 - 1.0) > 1e-10)
      throw ConfigError("config: figure-gap spectra need p1 > p2 > 0, p1 + p2 = 1");

  std::string out;
  out += "a_tau";
  for (const auto& [p1, p2] : spectra) {
    char label[64];
    std::snprintf(label, sizeof(label), ",gap_%.6g_%.6g", p1, p2);
    out += label;
  }
  out += '\n';
  for (int i = 1; i <= samples; ++i) {
    const double a_tau = kPi * i / (samples + 1);  // strictly inside (0, pi)
    out += qsl::format_double(a_tau);
    for (const auto& [p1, p2] : spectra) {
      const double gap =
          a_tau - std::acos(std::sqrt(qsl::qubit_fidelity_closed_form(p1, p2, a_tau)));
      out += ',';
      out += qsl::format_double(gap);
    }
    out += '\n';
  }

  if (!common.csv_path.empty()) {
    std::ofstream file(common.csv_path);
    if (!file) throw ConfigError("config: cannot open CSV path " + common.csv_path);
    file << out;
  } else {
    std::cout << out;
  }
  return kExitOk;
}

int cmd_validate(const CommonOptions& common, const std::string& suite) {
  const std::uint64_t seed = common.seed.value_or(20260810u);
  const std::vector<qsl::ValidateSummary> summaries =
      qsl::run_validation(suite, seed);
  bool all_pass = true;
  for (const qsl::ValidateSummary& summary : summaries) {
    for (const qsl::ValidateCheck& check : summary.checks) {
      std::printf("[%s] %-45s residual=%-12.3e tol=%-9.0e %s\n",
                  summary.suite.c_str(), check.name.c_str(), check.residual,
                  check.tolerance, check.pass ? "PASS" : "FAIL");
      all_pass = all_pass && check.pass;
    }
  }
  std::printf("%s\n", all_pass ? "validate: all invariants hold"
                               : "validate: FAILURES detected");
  return all_pass ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum speed limits for driven systems in mixed states"};
  app.require_subcommand(1);

  CommonOptions bounds_opts, geodesic_opts, gap_opts, validate_opts;
  int gap_samples = 256;
  std::string suite = "all";

  CLI::App* bounds = app.add_subcommand("bounds", "compute a speed-limit report");
  add_common_flags(bounds, bounds_opts);
  CLI::App* geodesic =
      app.add_subcommand("geodesic", "geodesic shooting and optimal Hamiltonian");
  add_common_flags(geodesic, geodesic_opts);
  CLI::App* gap = app.add_subcommand("figure-gap", "distance vs Bures gap curves");
  add_common_flags(gap, gap_opts);
  gap->add_option("--samples", gap_samples, "Sample count on (0, pi)");
  CLI::App* validate = app.add_subcommand("validate", "run invariant batteries");
  add_common_flags(validate, validate_opts);
  validate->add_option("suite", suite,
                       "qspeed|gauge|conservation|momentum|parallel|"
                       "euler-arnold|bounds-chain|states|all");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bounds->parsed()) return cmd_bounds(bounds_opts);
    if (geodesic->parsed()) return cmd_geodesic(geodesic_opts);
    if (gap->parsed()) return cmd_figure_gap(gap_opts, gap_samples);
    if (validate->parsed()) return cmd_validate(validate_opts, suite);
  } catch (const qsl::BoundViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const qsl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
