#pragma once

// Quantum speed limits: Mandelstam-Tamm via the geometric distance, the
// Uhlmann/Bures variant, the Margolus-Levitin bound for commuting driven
// families, the Deffner-Lutz bound and its improved form with the tangent
// constant beta, plus comparative report building.

#include <optional>
#include <string>

#include "qsl/dynamics.hpp"

namespace qsl {

/// Signals a computed bound exceeding the realized evolution time, i.e. an
/// integrator or precondition bug.
struct BoundViolation : Error {
  using Error::Error;
};

struct MtBounds {
  double geometric;  // hbar * distance / DeltaE
  double bures;      // hbar * bures / DeltaE
};

/// Mandelstam-Tamm pair. Requires delta_e > 0; stationary evolutions are
/// handled by the report's applicability flags, not here.
MtBounds mt_bounds(double distance, double bures, double delta_e,
                   double hbar = 1.0);

/// Margolus-Levitin bound pi hbar / (2 Ebar) for commuting families driving
/// fully distinguishable endpoints.
double ml_bound(double ebar, double hbar = 1.0);

/// Deffner-Lutz bound 4 hbar bures^2 / (pi^2 <H - E0>).
double dl_bound(double bures, double mean_shifted, double hbar = 1.0);

/// beta ~ 0.724 such that 1 - beta*x is tangent to cos(x): beta = sin(x0)
/// with cos(x0) = 1 - x0 sin(x0) on (2, 3). Root-found once and cached.
double beta_constant();

/// Tangency abscissa x0 of beta_constant.
double beta_tangency_point();

/// Improved Deffner-Lutz bound 4 hbar bures^2 / (beta pi^2 Ebar); equals
/// dl_bound / beta for time-independent Hamiltonians.
double dl_improved_bound(double bures, double ebar, double hbar = 1.0);

struct OverlapChain {
  double linear;     // hbar (1 - |Tr psi0^dag psi1|) / (beta Ebar)
  double arccos_sq;  // 4 hbar arccos^2 |Tr psi0^dag psi1| / (beta pi^2 Ebar)
};

/// Purification-overlap chain; with psi1 evolved from psi0 under the
/// ground-shifted Hamiltonian, linear >= arccos_sq >= dl_improved_bound.
OverlapChain purification_overlap_chain(const Purification& psi0,
                                        const Purification& psi1, double ebar,
                                        double hbar = 1.0);

/// Distance between the endpoints as established by the caller, with its
/// certification method ("closed-form", "prop2", "shooting", "coincident")
/// and the endpoint residual of the certifying geodesic when shot.
struct DistanceInfo {
  double value = 0.0;
  double residual = 0.0;
  std::string method = "closed-form";
};

/// A propagated run: the driving curve, initial data, and both trajectories
/// on the shared grid.
struct EvolutionRun {
  HamiltonianCurve h;
  DensityMatrix rho0;
  Purification psi0;
  SchrodingerTrajectory straj;
  VonNeumannTrajectory rtraj;
  double hbar = 1.0;
};

/// Propagate rho0 / psi0 under h on h's grid.
EvolutionRun make_run(const HamiltonianCurve& h, const DensityMatrix& rho0,
                      double hbar = 1.0);

struct BoundsReport {
  double tau = 0.0;
  double hbar = 1.0;
  double distance = 0.0;           // geodesic arc, radians
  double distance_residual = 0.0;  // shooting endpoint residual
  std::string distance_method;
  double bures = 0.0;
  double delta_e = 0.0;        // time-averaged energy uncertainty
  double ebar = 0.0;           // Tr(Hbar(tau) rho0), commuting families only
  double mean_shifted = 0.0;   // <H - E0>, commuting families only
  bool commuting = false;
  bool distinguishable = false;

  double mt_geometric = 0.0;
  double mt_bures = 0.0;
  double ml = 0.0;
  double dl = 0.0;
  double dl_improved = 0.0;

  bool mt_applicable = false;
  bool ml_applicable = false;
  bool dl_applicable = false;
  bool dl_improved_applicable = false;

  bool mt_saturated = false;
  bool ml_saturated = false;
};

/// Populate every field and applicability flag from a propagated run and the
/// endpoint distance; throws BoundViolation if an applicable bound exceeds
/// tau beyond the numerical allowance.
BoundsReport build_report(const EvolutionRun& run, const DistanceInfo& distance);

}  // namespace qsl
