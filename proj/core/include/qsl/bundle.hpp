#pragma once

// The purification bundle pi: S(sigma) -> D(sigma). Membership, projection,
// the mechanical connection and the horizontal/vertical splitting it induces,
// the metric on the gauge algebra u(sigma), the xi_H field measuring a
// Hamiltonian's deviation from parallelism, and metric momenta.

#include <vector>

#include "qsl/states.hpp"

namespace qsl {

// Defining tolerance of S(sigma) membership, ||psi^dag psi - P(sigma)||_F.
inline constexpr double kBundleTol = 1e-9;

/// Point of S(sigma): an n x k matrix psi with psi^dag psi = P(sigma).
class Purification {
 public:
  Purification(Matrix psi, Spectrum sigma);

  Eigen::Index ambient_dim() const { return psi_.rows(); }  // n
  Eigen::Index rank() const { return psi_.cols(); }         // k
  const Matrix& mat() const { return psi_; }
  const Spectrum& sigma() const { return sigma_; }

 private:
  Matrix psi_;
  Spectrum sigma_;
};

/// Element of u(sigma): anti-Hermitian k x k matrix commuting with P(sigma),
/// i.e. block diagonal with respect to the Pi_j blocks.
class GaugeAlgebraElement {
 public:
  GaugeAlgebraElement(AntiHermitianMatrix xi, Spectrum sigma);

  Eigen::Index dim() const { return xi_.dim(); }
  const Matrix& mat() const { return xi_.mat(); }
  const Spectrum& sigma() const { return sigma_; }

 private:
  AntiHermitianMatrix xi_;
  Spectrum sigma_;
};

/// Canonical purification of rho: V sqrt(Lambda) on the positive columns,
/// where rho = V Lambda V^dag with descending eigenvalues.
Purification purify(const DensityMatrix& rho);

/// pi(psi) = psi psi^dag.
DensityMatrix project(const Purification& psi);

/// Mechanical connection A_psi(X) = sum_j Pi_j psi^dag X Pi_j P(sigma)^{-1},
/// anti-Hermitized to kill round-off.
GaugeAlgebraElement connection(const Purification& psi, const Matrix& x);

struct Split {
  Matrix horizontal;
  Matrix vertical;
};

/// Orthogonal splitting X = X_h + X_v with X_v = psi * A_psi(X).
Split split(const Purification& psi, const Matrix& x);

/// Metric on u(sigma): xi . eta = -(1/2) Tr((xi eta + eta xi) P(sigma)).
double gauge_metric(const GaugeAlgebraElement& xi, const GaugeAlgebraElement& eta);

/// Norm under gauge_metric.
double gauge_norm(const GaugeAlgebraElement& xi);

/// Orthonormal basis of u(sigma) under gauge_metric. Starts from the standard
/// anti-Hermitian block basis and Gram-Schmidt orthonormalizes, since the
/// metric weights blocks by p_j.
std::vector<GaugeAlgebraElement> gauge_basis(const Spectrum& sigma);

/// The distinguished unit vector -i*1 of u(sigma).
GaugeAlgebraElement minus_i_identity(const Spectrum& sigma);

/// xi_H at the given lift: A_psi(H psi / (i hbar)). Its scalar invariants
/// (norm and component along -i*1) do not depend on the lift.
GaugeAlgebraElement xi_field(const Purification& psi, const HermitianMatrix& h,
                             double hbar = 1.0);

/// Projection of xi_H onto the orthogonal complement of -i*1.
GaugeAlgebraElement xi_perp(const GaugeAlgebraElement& xi_h);

struct QuantumSpeedTerms {
  double g_xh;        // g(X_H, X_H), squared horizontal speed
  double delta_h_sq;  // Tr(H^2 rho) - Tr(H rho)^2
  double perp_sq;     // xi_H^perp . xi_H^perp
  double mean_h;      // Tr(H rho)
};

/// Ingredients of the identity hbar^2 g(X_H, X_H) = Delta H^2 - hbar^2 perp^2.
QuantumSpeedTerms qspeed_terms(const Purification& psi, const HermitianMatrix& h,
                               double hbar = 1.0);

/// Metric momentum functional J_psi(psi_dot), as its values on the
/// gauge_basis(sigma) elements: J(psi_dot)(xi) = G(psi_dot, psi xi).
Eigen::VectorXd metric_momentum(const Purification& psi, const Matrix& psi_dot);

}  // namespace qsl
