#pragma once

// Geometry of D(sigma): the star metric on u(n) induced by a reference
// state, the Euler-Arnold equation and its integrator, optimal-Hamiltonian
// synthesis, two-eigenvalue closed-form geodesics, and distance estimation
// by multi-start geodesic shooting.

#include <cstdint>
#include <string>
#include <vector>

#include "qsl/dynamics.hpp"

namespace qsl {

/// Metric xi * eta = -(1/2) Tr((xi eta + eta xi) rho0) on the full algebra
/// u(n), positive definite for invertible rho0. Caches the Gram matrix on a
/// Frobenius-orthonormal basis of u(n), factored once.
class StarMetric {
 public:
  explicit StarMetric(const DensityMatrix& rho0);

  double inner(const AntiHermitianMatrix& xi, const AntiHermitianMatrix& eta) const;

  /// ad*_xi xi: the unique zeta with zeta * eta = xi * [xi, eta] for all eta,
  /// obtained by solving the cached Gram system.
  AntiHermitianMatrix coadjoint(const AntiHermitianMatrix& xi) const;

  const DensityMatrix& rho0() const { return rho0_; }
  const std::vector<Matrix>& basis() const { return basis_; }

 private:
  DensityMatrix rho0_;
  std::vector<Matrix> basis_;
  Eigen::LDLT<Eigen::MatrixXd> gram_;
};

/// Free-function form of the star metric.
double star_metric(const AntiHermitianMatrix& xi, const AntiHermitianMatrix& eta,
                   const DensityMatrix& rho0);

/// Free-function form of ad*_xi xi.
AntiHermitianMatrix coadjoint_term(const AntiHermitianMatrix& xi,
                                   const StarMetric& metric);

struct EulerArnoldFlow {
  std::vector<double> times;
  std::vector<AntiHermitianMatrix> xi;  // Euler-Arnold solution at the nodes
  std::vector<Matrix> unitaries;        // U(t) = exp_-(int xi dt)
  HamiltonianCurve hamiltonian;         // H_xi(t) = i hbar U xi U^dag
};

/// Integrate the Euler-Arnold equation xi' = ad*_xi xi with classical RK4,
/// re-anti-Hermitizing each step, and accumulate U(t) with a fourth-order
/// commutator-free exponential scheme so it stays exactly unitary.
EulerArnoldFlow euler_arnold_integrate(const AntiHermitianMatrix& xi0,
                                       const DensityMatrix& rho0, double duration,
                                       int steps, double hbar = 1.0);

/// Gauge norm of the connection applied to the fundamental field of xi at
/// psi0; zero means the fundamental field is horizontal there.
double horizontality_check(const AntiHermitianMatrix& xi, const Purification& psi0);

/// xi minus the generator of its vertical part at psi0,
/// xi - psi0 A_psi0(xi psi0) P(sigma)^{-1} psi0^dag; its fundamental field is
/// horizontal at psi0.
AntiHermitianMatrix horizontal_generator(const AntiHermitianMatrix& xi,
                                         const Purification& psi0);

struct TwoEigenvaluePoint {
  Matrix psi;
  DensityMatrix rho;
};

/// Geodesic of a two-eigenvalue spectrum from the diagonal state P(sigma):
/// psi(t) = exp(t xi) sqrt(P(sigma)), in closed form for the qubit case.
/// xi must be off-diagonal-block with respect to the (m1, m2) split.
TwoEigenvaluePoint two_eigenvalue_geodesic(double p1, double p2, int m1, int m2,
                                           const AntiHermitianMatrix& xi, double t);

struct ShootOptions {
  double tol = 1e-6;          // accepted endpoint Bures angle
  int starts = 8;
  std::uint64_t seed = 20260810;
  int search_steps = 96;      // integration steps while searching
  int steps = 400;            // integration steps of the refined result
  int max_evals = 6000;       // objective evaluations per start
  double hbar = 1.0;
};

struct GeodesicResult {
  AntiHermitianMatrix xi0;      // initial velocity generator, horizontal at psi0
  double speed = 0.0;           // sqrt(xi0 * xi0)
  double duration = 1.0;        // unit-duration parameterization
  double residual = 0.0;        // endpoint Bures angle of the refined curve
  double distance_estimate = 0.0;  // speed * duration
  bool accepted = false;
  // The search certifies an upper bound only; global minimality is not
  // certified (the injectivity radius of D(sigma) is spectrum dependent).
  std::string certificate = "upper-bound-from-best-geodesic";
  VonNeumannTrajectory curve;   // generator carries the synthesized H_xi
};

/// Multi-start geodesic shooting between isospectral states. Searches
/// horizontal initial velocities at a purification of rho0 with
/// derivative-free local refinement, integrating Euler-Arnold when rho0 is
/// invertible and the constrained purification-space geodesic equation for
/// rank-deficient states.
GeodesicResult geodesic_shoot(const DensityMatrix& rho0, const DensityMatrix& rho1,
                              const ShootOptions& opts = {});

struct OptimalHamiltonian {
  HamiltonianCurve h;
  GeodesicResult geodesic;
  double saturation_rel = 0.0;  // |mt_geometric - tau| / tau on a rerun
  double xi_perp_max = 0.0;     // max gauge norm of xi_H^perp along the curve
};

/// Optimal Hamiltonian from the accepted geodesic; time-independent for
/// two-eigenvalue spectra.
OptimalHamiltonian optimal_hamiltonian(const DensityMatrix& rho0,
                                       const DensityMatrix& rho1,
                                       const ShootOptions& opts = {});

}  // namespace qsl
