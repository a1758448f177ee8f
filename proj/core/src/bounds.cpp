#include "qsl/bounds.hpp"

#include <cmath>
#include <numbers>

namespace qsl {

namespace {

constexpr double kPi = std::numbers::pi;

// Relative window for flagging a bound as saturated.
constexpr double kSaturationWindow = 1e-4;

}  // namespace

MtBounds mt_bounds(double distance, double bures, double delta_e, double hbar) {
  require(delta_e > 0, "mt_bounds: stationary evolution (DeltaE = 0)");
  require(distance >= 0 && bures >= 0, "mt_bounds: negative input");
  return MtBounds{hbar * distance / delta_e, hbar * bures / delta_e};
}

double ml_bound(double ebar, double hbar) {
  require(ebar > 0, "ml_bound: Ebar must be positive");
  return kPi * hbar / (2.0 * ebar);
}

double dl_bound(double bures, double mean_shifted, double hbar) {
  require(mean_shifted > 0, "dl_bound: <H - E0> must be positive");
  return 4.0 * hbar * bures * bures / (kPi * kPi * mean_shifted);
}

double beta_tangency_point() {
  // Tangency of 1 - beta*x with cos(x): g(x) = cos(x) - 1 + x sin(x) = 0,
  // g'(x) = x cos(x), strictly monotone on (2, 3).
  static const double x0 = [] {
    double x = 2.3;
    for (int iter = 0; iter < 60; ++iter) {
      const double g = std::cos(x) - 1.0 + x * std::sin(x);
      const double dg = x * std::cos(x);
      const double next = x - g / dg;
      if (std::abs(next - x) < 1e-15) return next;
      x = next;
    }
    return x;
  }();
  return x0;
}

double beta_constant() {
  static const double beta = std::sin(beta_tangency_point());
  return beta;
}

double dl_improved_bound(double bures, double ebar, double hbar) {
  require(ebar > 0, "dl_improved_bound: Ebar must be positive");
  return 4.0 * hbar * bures * bures / (beta_constant() * kPi * kPi * ebar);
}

OverlapChain purification_overlap_chain(const Purification& psi0,
                                        const Purification& psi1, double ebar,
                                        double hbar) {
  require(ebar > 0, "purification_overlap_chain: Ebar must be positive");
  require(psi0.ambient_dim() == psi1.ambient_dim() && psi0.rank() == psi1.rank(),
          "purification_overlap_chain: shape mismatch");
  const double overlap =
      std::min(1.0, std::abs((psi0.mat().adjoint() * psi1.mat()).trace()));
  const double beta = beta_constant();
  const double angle = std::acos(overlap);
  return OverlapChain{hbar * (1.0 - overlap) / (beta * ebar),
                      4.0 * hbar * angle * angle / (beta * kPi * kPi * ebar)};
}

EvolutionRun make_run(const HamiltonianCurve& h, const DensityMatrix& rho0,
                      double hbar) {
  Purification psi0 = purify(rho0);
  SchrodingerTrajectory straj = evolve_schrodinger(h, psi0, hbar);
  VonNeumannTrajectory rtraj = evolve_von_neumann(h, rho0, hbar);
  return EvolutionRun{h, rho0, std::move(psi0), std::move(straj),
                      std::move(rtraj), hbar};
}

BoundsReport build_report(const EvolutionRun& run, const DistanceInfo& distance) {
  BoundsReport rep;
  rep.tau = run.h.tau();
  rep.hbar = run.hbar;
  rep.distance = distance.value;
  rep.distance_residual = distance.residual;
  rep.distance_method = distance.method;

  const DensityMatrix& rho1 = run.rtraj.rho.back();
  rep.bures = bures_angle(run.rho0, rho1);
  rep.delta_e = dispersion_integral(run.h, run.rtraj).delta_e;
  rep.commuting = commuting_family(run.h);
  rep.distinguishable = fully_distinguishable(run.rho0, rho1);

  rep.mt_applicable = rep.delta_e > 0;
  if (rep.mt_applicable) {
    const MtBounds mt = mt_bounds(rep.distance, rep.bures, rep.delta_e, run.hbar);
    rep.mt_geometric = mt.geometric;
    rep.mt_bures = mt.bures;
    rep.mt_saturated = std::abs(rep.mt_geometric - rep.tau) <=
                       kSaturationWindow * rep.tau;
  }

  if (rep.commuting) {
    const AveragedHamiltonian avg = averaged_hamiltonian(run.h);
    rep.ebar = avg.mean(run.rho0);
    rep.mean_shifted = mean_shifted_energy(run.rtraj);

    rep.ml_applicable = rep.distinguishable && rep.ebar > 0;
    if (rep.ml_applicable) {
      rep.ml = ml_bound(rep.ebar, run.hbar);
      rep.ml_saturated = std::abs(rep.ml - rep.tau) <= kSaturationWindow * rep.tau;
    }
    rep.dl_applicable = rep.mean_shifted > 0;
    if (rep.dl_applicable) rep.dl = dl_bound(rep.bures, rep.mean_shifted, run.hbar);
    rep.dl_improved_applicable = rep.ebar > 0;
    if (rep.dl_improved_applicable)
      rep.dl_improved = dl_improved_bound(rep.bures, rep.ebar, run.hbar);
  }

  // Every applicable bound must respect tau. A distance certified by
  // shooting is an upper bound with the accepted endpoint residual as its
  // error bar; allow that much beyond the 1e-9 slack so a saturated run
  // cannot trip a false violation.
  double mt_allowance = 1e-9;
  if (rep.distance_method == "shooting" && rep.delta_e > 0)
    mt_allowance += run.hbar * 8.0 * std::max(rep.distance_residual, 1e-6) /
                    rep.delta_e;
  auto enforce = [&](bool applicable, double bound, const char* name,
                     double allowance) {
    if (applicable && bound > rep.tau + allowance)
      throw BoundViolation(std::string("build_report: ") + name + " bound " +
                           std::to_string(bound) + " exceeds tau " +
                           std::to_string(rep.tau));
  };
  enforce(rep.mt_applicable, rep.mt_geometric, "MT-geometric", mt_allowance);
  enforce(rep.mt_applicable, rep.mt_bures, "MT-Bures", 1e-9);
  enforce(rep.ml_applicable, rep.ml, "ML", 1e-9);
  enforce(rep.dl_applicable, rep.dl, "DL", 1e-9);
  enforce(rep.dl_improved_applicable, rep.dl_improved, "DL-improved", 1e-9);
  if (rep.mt_applicable)
    require(rep.mt_geometric >= rep.mt_bures - 1e-9,
            "build_report: geometric MT bound below Bures MT bound");
  return rep;
}

}  // namespace qsl
