#include "qsl/validate.hpp"

#include <cmath>
#include <numbers>

#include "qsl/distance.hpp"
#include "qsl/geodesy.hpp"

namespace qsl {

namespace {

constexpr double kPi = std::numbers::pi;

struct CheckAccumulator {
  ValidateSummary summary;

  explicit CheckAccumulator(std::string suite) { summary.suite = std::move(suite); }

  void add(const std::string& name, double residual, double tol) {
    summary.checks.push_back(ValidateCheck{name, residual, tol, residual <= tol});
  }
};

HamiltonianCurve random_curve(int n, double tau, int nodes, Rng& rng,
                              double scale = 1.0) {
  const HermitianMatrix h0 = random_hermitian(n, rng, scale);
  const HermitianMatrix h1 = random_hermitian(n, rng, 0.5 * scale);
  const double omega = 1.0 + 2.0 * rng.uniform();
  const double phase = 2.0 * kPi * rng.uniform();
  std::vector<double> times(nodes);
  std::vector<HermitianMatrix> samples;
  samples.reserve(nodes);
  for (int j = 0; j < nodes; ++j) {
    times[j] = tau * j / (nodes - 1);
    samples.push_back(HermitianMatrix(
        h0.mat() + std::sin(omega * times[j] + phase) * h1.mat()));
  }
  return HamiltonianCurve(std::move(times), std::move(samples));
}

Matrix random_gauge_unitary(const Spectrum& sigma, Rng& rng) {
  const std::vector<GaugeAlgebraElement> basis = gauge_basis(sigma);
  Matrix combo = Matrix::Zero(sigma.rank(), sigma.rank());
  for (const GaugeAlgebraElement& b : basis) combo += rng.normal() * b.mat();
  return exp_antiherm(AntiHermitianMatrix(std::move(combo)));
}

struct RandomState {
  Spectrum sigma;
  int n;
  DensityMatrix rho;
  Purification psi;
};

RandomState random_state(Rng& rng, int max_levels, int max_dim) {
  const Spectrum sigma = random_spectrum(rng, max_levels, max_dim);
  const int n = sigma.rank() +
                static_cast<int>(rng.below(max_dim - sigma.rank() + 1));
  DensityMatrix rho = random_density(sigma, n, rng.below(1u << 30));
  Purification psi = purify(rho);
  return RandomState{sigma, n, std::move(rho), std::move(psi)};
}

// ---------------------------------------------------------------------------

ValidateSummary suite_qspeed(std::uint64_t seed) {
  CheckAccumulator acc("qspeed");
  Rng rng(seed ^ 0x71737065ULL);
  double worst_identity = 0.0, worst_decomp = 0.0, worst_mean = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const RandomState st = random_state(rng, 3, 6);
    const double hbar = trial % 2 == 0 ? 1.0 : 0.5;
    const HermitianMatrix h = random_hermitian(st.n, rng);
    const QuantumSpeedTerms terms = qspeed_terms(st.psi, h, hbar);
    const double scale = std::max({terms.delta_h_sq, hbar * hbar * terms.g_xh,
                                   hbar * hbar * terms.perp_sq, 1e-12});
    worst_identity = std::max(
        worst_identity,
        std::abs(hbar * hbar * terms.g_xh -
                 (terms.delta_h_sq - hbar * hbar * terms.perp_sq)) /
            scale);

    const GaugeAlgebraElement xi = xi_field(st.psi, h, hbar);
    const double mean_h2 = (h.mat() * h.mat() * st.rho.mat()).trace().real();
    worst_decomp = std::max(
        worst_decomp,
        std::abs(mean_h2 - hbar * hbar * (terms.g_xh + gauge_metric(xi, xi))) /
            std::max(mean_h2, 1e-12));
    worst_mean = std::max(
        worst_mean,
        std::abs(hbar * gauge_metric(minus_i_identity(st.sigma), xi) -
                 terms.mean_h) /
            std::max(std::abs(terms.mean_h), 1.0));
  }
  acc.add("thm2-identity-rel (50 random instances)", worst_identity, 1e-8);
  acc.add("energy-decomposition-rel", worst_decomp, 1e-8);
  acc.add("mean-energy-identity-rel", worst_mean, 1e-9);
  return acc.summary;
}

ValidateSummary suite_gauge(std::uint64_t seed) {
  CheckAccumulator acc("gauge");
  Rng rng(seed ^ 0x67617567ULL);
  double worst_cov = 0.0, worst_scalar = 0.0, worst_ortho = 0.0, worst_horiz = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const RandomState st = random_state(rng, 3, 6);
    Matrix x(st.n, st.sigma.rank());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.cnormal();

    const GaugeAlgebraElement a = connection(st.psi, x);
    const HermitianMatrix h = random_hermitian(st.n, rng);
    const GaugeAlgebraElement xi = xi_field(st.psi, h);
    const double norm0 = gauge_metric(xi, xi);
    const double along0 = gauge_metric(minus_i_identity(st.sigma), xi);
    for (int shift = 0; shift < 10; ++shift) {
      const Matrix v = random_gauge_unitary(st.sigma, rng);
      const Purification shifted(st.psi.mat() * v, st.sigma);
      const GaugeAlgebraElement a_shift = connection(shifted, x * v);
      worst_cov = std::max(worst_cov, (a_shift.mat() - v.adjoint() * a.mat() * v)
                                          .norm());
      const GaugeAlgebraElement xi_shift = xi_field(shifted, h);
      worst_scalar = std::max(
          worst_scalar, std::abs(gauge_metric(xi_shift, xi_shift) - norm0));
      worst_scalar = std::max(
          worst_scalar,
          std::abs(gauge_metric(minus_i_identity(st.sigma), xi_shift) - along0));
    }

    const Split parts = split(st.psi, x);
    const double x2 = hs_forms(x, x).g;
    worst_ortho = std::max(
        worst_ortho, std::abs(hs_forms(parts.horizontal, parts.vertical).g) /
                         std::max(x2, 1e-12));
    worst_horiz = std::max(
        worst_horiz, gauge_norm(connection(st.psi, parts.horizontal)));
  }
  acc.add("connection-gauge-covariance", worst_cov, 1e-9);
  acc.add("xi-field-scalar-invariance", worst_scalar, 1e-9);
  acc.add("split-orthogonality-rel", worst_ortho, 1e-9);
  acc.add("horizontal-part-in-kernel", worst_horiz, 1e-9);
  return acc.summary;
}

ValidateSummary suite_conservation(std::uint64_t seed) {
  CheckAccumulator acc("conservation");
  Rng rng(seed ^ 0x636f6e73ULL);
  const Spectrum sigma({0.5, 0.25}, {1, 2});
  const int n = 4;
  const DensityMatrix rho0 = random_density(sigma, n, rng.below(1u << 30));
  const Purification psi0 = purify(rho0);
  const int nodes = 1001;
  const HamiltonianCurve h = random_curve(n, 1.0, nodes, rng);

  const SchrodingerTrajectory straj = evolve_schrodinger(h, psi0);
  const SpectralOperator spectral = p_sigma(sigma);
  double drift = 0.0;
  for (const Purification& psi : straj.psi)
    drift = std::max(drift, (psi.mat().adjoint() * psi.mat() -
                             spectral.p.mat()).norm());
  acc.add("purification-constraint-drift (1e3 steps)", drift, 1e-10);

  const VonNeumannTrajectory rtraj = evolve_von_neumann(h, rho0);
  const EigHerm ref = eig_herm(rho0.herm());
  double spec_drift = 0.0;
  for (const DensityMatrix& rho : rtraj.rho) {
    const EigHerm ed = eig_herm(rho.herm());
    spec_drift = std::max(spec_drift, (ed.values - ref.values).cwiseAbs().maxCoeff());
  }
  acc.add("spectrum-drift", spec_drift, 1e-10);

  const SchrodingerTrajectory lift = horizontal_lift(h, psi0);
  double proj_match = 0.0;
  for (std::size_t j = 0; j < lift.psi.size(); ++j)
    proj_match = std::max(proj_match,
                          (lift.psi[j].mat() * lift.psi[j].mat().adjoint() -
                           rtraj.rho[j].mat()).norm());
  acc.add("lift-projection-match", proj_match, 1e-9);

  // Horizontality of the lifted curve, probed with a fourth-order central
  // finite-difference velocity so the measurement is independent of the
  // construction.
  const double dt = h.dt();
  double lift_residual = 0.0;
  double lift_momentum = 0.0;
  for (std::size_t j = 2; j + 2 < lift.psi.size(); j += 25) {
    const Matrix v = (-lift.psi[j + 2].mat() + 8.0 * lift.psi[j + 1].mat() -
                      8.0 * lift.psi[j - 1].mat() + lift.psi[j - 2].mat()) /
                     (12.0 * dt);
    lift_residual =
        std::max(lift_residual, gauge_norm(connection(lift.psi[j], v)));
    lift_momentum = std::max(
        lift_momentum, metric_momentum(lift.psi[j], v).cwiseAbs().maxCoeff());
  }
  acc.add("horizontal-lift-connection-residual", lift_residual, 1e-7);
  acc.add("horizontal-lift-momentum", lift_momentum, 1e-7);
  return acc.summary;
}

ValidateSummary suite_momentum(std::uint64_t seed) {
  CheckAccumulator acc("momentum");
  Rng rng(seed ^ 0x6d6f6d65ULL);
  const Spectrum sigma({0.5, 1.0 / 3.0, 1.0 / 6.0}, {1, 1, 1});
  const DensityMatrix rho0 = random_density(sigma, 3, rng.below(1u << 30));
  const Purification psi0 = purify(rho0);

  // Horizontal geodesic: momentum stays the zero functional.
  const AntiHermitianMatrix xi_h =
      horizontal_generator(random_antihermitian(3, rng), psi0);
  const EulerArnoldFlow flow_h = euler_arnold_integrate(xi_h, rho0, 1.0, 1000);
  double horiz_mom = 0.0;
  for (std::size_t j = 0; j < flow_h.unitaries.size(); j += 20) {
    const Matrix psi = flow_h.unitaries[j] * psi0.mat();
    const Matrix v = flow_h.unitaries[j] * flow_h.xi[j].mat() * psi0.mat();
    horiz_mom = std::max(horiz_mom, metric_momentum(Purification(psi, sigma), v)
                                        .cwiseAbs()
                                        .maxCoeff());
  }
  acc.add("horizontal-geodesic-momentum-zero", horiz_mom, 1e-7);

  // Generic geodesic: momentum conserved but nonzero.
  const AntiHermitianMatrix xi_g = random_antihermitian(3, rng);
  const EulerArnoldFlow flow_g = euler_arnold_integrate(xi_g, rho0, 1.0, 1000);
  Eigen::VectorXd mom0;
  double drift = 0.0;
  for (std::size_t j = 0; j < flow_g.unitaries.size(); j += 20) {
    const Matrix psi = flow_g.unitaries[j] * psi0.mat();
    const Matrix v = flow_g.unitaries[j] * flow_g.xi[j].mat() * psi0.mat();
    const Eigen::VectorXd mom = metric_momentum(Purification(psi, sigma), v);
    if (mom0.size() == 0)
      mom0 = mom;
    else
      drift = std::max(drift, (mom - mom0).cwiseAbs().maxCoeff());
  }
  acc.add("geodesic-momentum-conservation", drift, 1e-7);
  return acc.summary;
}

ValidateSummary suite_parallel(std::uint64_t seed) {
  CheckAccumulator acc("parallel");
  Rng rng(seed ^ 0x70617261ULL);
  double worst_xi = 0.0, worst_comm = 0.0, worst_len = 0.0, worst_ineq = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const RandomState st = random_state(rng, 2, 4);
    const HamiltonianCurve h = random_curve(st.n, 1.0, 801, rng);
    const SchrodingerTrajectory straj = evolve_schrodinger(h, st.psi);
    const HamiltonianCurve h_par = parallel_hamiltonian(h, straj);

    for (std::size_t j = 0; j < straj.psi.size(); j += 40) {
      const int idx = static_cast<int>(j);
      worst_xi = std::max(
          worst_xi, gauge_norm(xi_field(straj.psi[j], h_par.sample(idx))));
      const Matrix rho = straj.psi[j].mat() * straj.psi[j].mat().adjoint();
      const Matrix dh = h_par.sample(idx).mat() - h.sample(idx).mat();
      worst_comm = std::max(worst_comm, (dh * rho - rho * dh).norm());
    }

    const VonNeumannTrajectory rtraj_par = evolve_von_neumann(h_par, st.rho);
    const double len = curve_length(rtraj_par, st.psi);
    const double disp_par = dispersion_integral(h_par, rtraj_par).integral;
    worst_len = std::max(worst_len,
                         std::abs(len - disp_par) / std::max(1.0, std::abs(len)));

    // Original (non-parallel) driving must dominate the length.
    const VonNeumannTrajectory rtraj = evolve_von_neumann(h, st.rho);
    const double disp = dispersion_integral(h, rtraj).integral;
    worst_ineq = std::max(worst_ineq, curve_length(rtraj, st.psi) - disp);
  }
  acc.add("parallel-xi-field", worst_xi, 1e-8);
  acc.add("parallel-commutator-match", worst_comm, 1e-8);
  acc.add("length-equals-dispersion-rel", worst_len, 1e-6);
  acc.add("length-below-dispersion", worst_ineq, 1e-9);
  return acc.summary;
}

ValidateSummary suite_bounds_chain(std::uint64_t seed) {
  CheckAccumulator acc("bounds-chain");
  Rng rng(seed ^ 0x626f756eULL);
  double worst_tau = -1.0, worst_order = -1.0;
  int violations = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const bool qutrit = trial >= 14;
    try {
      DistanceInfo dist;
      BoundsReport rep;
      if (!qutrit) {
        const double p1 = 0.55 + 0.35 * rng.uniform();
        const Spectrum sigma({p1, 1.0 - p1}, {1, 1});
        const DensityMatrix rho0 = random_density(sigma, 2, rng.below(1u << 30));
        const HamiltonianCurve h =
            random_curve(2, 0.3 + 0.9 * rng.uniform(), 401, rng);
        const EvolutionRun run = make_run(h, rho0);
        dist = compute_distance(rho0, run.rtraj.rho.back());
        rep = build_report(run, dist);
      } else {
        const Spectrum sigma = random_spectrum(rng, 3, 3);
        const DensityMatrix rho0 = random_density(sigma, 3, rng.below(1u << 30));
        const HamiltonianCurve h =
            random_curve(3, 0.2 + 0.4 * rng.uniform(), 301, rng);
        const EvolutionRun run = make_run(h, rho0);
        ShootOptions opts;
        opts.starts = 6;
        opts.search_steps = 64;
        opts.steps = 256;
        opts.max_evals = 3000;
        opts.seed = seed + trial;
        dist = compute_distance(rho0, run.rtraj.rho.back(), opts);
        rep = build_report(run, dist);
      }
      if (rep.mt_applicable) {
        worst_tau = std::max(worst_tau, rep.mt_geometric - rep.tau);
        worst_order = std::max(worst_order, rep.mt_bures - rep.mt_geometric);
      }
    } catch (const Error&) {
      ++violations;
    }
  }
  acc.add("chain-tau-slack (20 random runs)", std::max(worst_tau, 0.0), 1e-9);
  acc.add("chain-ordering-slack", std::max(worst_order, 0.0), 1e-9);
  acc.add("chain-exceptions", violations, 0.5);
  return acc.summary;
}

ValidateSummary suite_euler_arnold(std::uint64_t seed) {
  CheckAccumulator acc("euler-arnold");
  Rng rng(seed ^ 0x65756c65ULL);
  const Spectrum sigma({0.5, 1.0 / 3.0, 1.0 / 6.0}, {1, 1, 1});
  const DensityMatrix rho0 = random_density(sigma, 3, rng.below(1u << 30));
  const StarMetric metric(rho0);

  // Speed conservation along a generic flow.
  const AntiHermitianMatrix xi0 = random_antihermitian(3, rng);
  const EulerArnoldFlow flow = euler_arnold_integrate(xi0, rho0, 1.0, 1000);
  const double speed0 = metric.inner(xi0, xi0);
  double drift = 0.0;
  for (const AntiHermitianMatrix& xi : flow.xi)
    drift = std::max(drift, std::abs(metric.inner(xi, xi) - speed0));
  acc.add("speed-conservation (1e3 steps)", drift, 1e-8);

  // Defining identity of the coadjoint term against brute-force evaluation
  // on the full basis.
  double identity_residual = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const AntiHermitianMatrix xi = random_antihermitian(3, rng);
    const AntiHermitianMatrix zeta = metric.coadjoint(xi);
    for (const Matrix& b : metric.basis()) {
      const AntiHermitianMatrix eta(b);
      const Matrix bracket = xi.mat() * b - b * xi.mat();
      const double lhs = metric.inner(zeta, eta);
      const double rhs =
          -0.5 * ((xi.mat() * bracket + bracket * xi.mat()) * rho0.mat())
                     .trace()
                     .real();
      identity_residual = std::max(identity_residual, std::abs(lhs - rhs));
    }
  }
  acc.add("coadjoint-defining-identity (n=3 basis)", identity_residual, 1e-10);

  // Maximally mixed reference: every ad* vanishes.
  const DensityMatrix mixed(HermitianMatrix(Matrix::Identity(3, 3) / 3.0));
  const StarMetric bi(mixed);
  double mixed_norm = 0.0;
  for (int trial = 0; trial < 5; ++trial)
    mixed_norm = std::max(
        mixed_norm, bi.coadjoint(random_antihermitian(3, rng)).mat().norm());
  acc.add("bi-invariant-coadjoint-zero", mixed_norm, 1e-12);

  // Two-eigenvalue spectra: horizontal xi is stationary.
  const Spectrum sigma2({0.35, 0.15}, {1, 2});
  const SpectralOperator spectral2 = p_sigma(sigma2);
  const StarMetric metric2(spectral2.p);
  Matrix block = Matrix::Zero(3, 3);
  block(0, 1) = rng.cnormal();
  block(0, 2) = rng.cnormal();
  block(1, 0) = -std::conj(block(0, 1));
  block(2, 0) = -std::conj(block(0, 2));
  const AntiHermitianMatrix xi2(block);
  acc.add("two-eigenvalue-horizontal-coadjoint",
          metric2.coadjoint(xi2).mat().norm(), 1e-12);
  const EulerArnoldFlow flow2 = euler_arnold_integrate(xi2, spectral2.p, 1.0, 1000);
  double xi_drift = 0.0;
  for (const AntiHermitianMatrix& xi : flow2.xi)
    xi_drift = std::max(xi_drift, (xi.mat() - xi2.mat()).norm());
  acc.add("two-eigenvalue-xi-constant", xi_drift, 1e-10);

  // The synthesized Hamiltonian reproduces U(t) psi0 through the Schrodinger
  // integrator.
  const Purification psi0 = purify(rho0);
  const SchrodingerTrajectory straj = evolve_schrodinger(flow.hamiltonian, psi0);
  double match = 0.0;
  for (std::size_t j = 0; j < straj.psi.size(); ++j)
    match = std::max(match,
                     (straj.psi[j].mat() - flow.unitaries[j] * psi0.mat()).norm());
  acc.add("hamiltonian-schrodinger-match", match, 1e-7);
  return acc.summary;
}

ValidateSummary suite_states(std::uint64_t seed) {
  CheckAccumulator acc("states");
  Rng rng(seed ^ 0x73746174ULL);

  double worst_unitary = 0.0, worst_sym = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const RandomState a = random_state(rng, 3, 5);
    const DensityMatrix b = random_density(a.sigma, a.n, rng.below(1u << 30));
    const double f = fidelity(a.rho, b);
    const Matrix u = haar_unitary(a.n, rng);
    const DensityMatrix ua(HermitianMatrix(u * a.rho.mat() * u.adjoint()));
    const DensityMatrix ub(HermitianMatrix(u * b.mat() * u.adjoint()));
    worst_unitary = std::max(worst_unitary, std::abs(fidelity(ua, ub) - f));
    worst_sym = std::max(worst_sym, std::abs(fidelity(b, a.rho) - f));
  }
  acc.add("fidelity-unitary-invariance", worst_unitary, 1e-9);
  acc.add("fidelity-symmetry", worst_sym, 1e-9);

  double worst_spec = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Spectrum sigma = random_spectrum(rng, 3, 6);
    const int n = sigma.rank() + static_cast<int>(rng.below(3));
    const Spectrum back = spectrum_of(random_density(sigma, n, rng.below(1u << 30)));
    if (!back.same_as(sigma)) {
      worst_spec = 1.0;
      break;
    }
    for (int j = 0; j < sigma.levels(); ++j)
      worst_spec = std::max(worst_spec, std::abs(back.p()[j] - sigma.p()[j]));
  }
  acc.add("spectrum-roundtrip", worst_spec, kDegeneracyTol);

  // Closed-form qubit fidelity against the general algorithm along the
  // constant-generator curve.
  double worst_fid = 0.0;
  const double p1 = 2.0 / 3.0, p2 = 1.0 / 3.0;
  for (int s = 1; s <= 50; ++s) {
    const double a_tau = kPi * s / 51.0;
    Matrix xi(2, 2);
    xi << 0.0, 1.0, -1.0, 0.0;
    const TwoEigenvaluePoint pt =
        two_eigenvalue_geodesic(p1, p2, 1, 1, AntiHermitianMatrix(xi), a_tau);
    const DensityMatrix rho0(
        HermitianMatrix((Matrix(2, 2) << p1, 0, 0, p2).finished()));
    worst_fid = std::max(worst_fid,
                         std::abs(fidelity(rho0, pt.rho) -
                                  qubit_fidelity_closed_form(p1, p2, a_tau)));
  }
  acc.add("qubit-fidelity-closed-form (50 samples)", worst_fid, 1e-9);
  return acc.summary;
}

}  // namespace

std::vector<ValidateSummary> run_validation(const std::string& selector,
                                            std::uint64_t seed) {
  std::vector<ValidateSummary> out;
  const auto want = [&](const char* name) {
    return selector == "all" || selector == name;
  };
  if (want("states")) out.push_back(suite_states(seed));
  if (want("qspeed")) out.push_back(suite_qspeed(seed));
  if (want("gauge")) out.push_back(suite_gauge(seed));
  if (want("conservation")) out.push_back(suite_conservation(seed));
  if (want("momentum")) out.push_back(suite_momentum(seed));
  if (want("parallel")) out.push_back(suite_parallel(seed));
  if (want("euler-arnold")) out.push_back(suite_euler_arnold(seed));
  if (want("bounds-chain")) out.push_back(suite_bounds_chain(seed));
  require(!out.empty(), "run_validation: unknown suite \"" + selector + "\"");
  return out;
}

}  // namespace qsl
