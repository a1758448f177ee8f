#pragma once

// Spectra of density operators, the spectral operator P(sigma), density
// matrices, Uhlmann fidelity and the Bures angle, distinguishability tests,
// and seeded random state generation.

#include <cstdint>
#include <vector>

#include "qsl/matkern.hpp"
#include "qsl/random.hpp"

namespace qsl {

// Eigenvalues below this are dropped when a spectrum is read off a state.
inline constexpr double kNullEigenvalue = 1e-10;

/// Spectrum of a density operator: strictly descending positive eigenvalues
/// p with multiplicities m, sum(p_j m_j) = 1 within 1e-10. Zero eigenvalues
/// are not part of a spectrum; the embedding dimension is carried separately.
class Spectrum {
 public:
  Spectrum(std::vector<double> p, std::vector<int> m);

  int levels() const { return static_cast<int>(p_.size()); }  // l
  int rank() const { return rank_; }                          // k
  const std::vector<double>& p() const { return p_; }
  const std::vector<int>& m() const { return m_; }

  /// Eigenvalue associated with computational-basis index i in [0, k).
  double level_of_index(int i) const;
  /// Index of the first basis vector of block j.
  int block_offset(int j) const;

  bool same_as(const Spectrum& other, double tol = kDegeneracyTol) const;

 private:
  std::vector<double> p_;
  std::vector<int> m_;
  int rank_ = 0;
};

/// Density matrix: Hermitian, positive semidefinite within 1e-10, unit trace
/// within 1e-10.
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianMatrix a);
  explicit DensityMatrix(const Matrix& a) : DensityMatrix(HermitianMatrix(a)) {}

  Eigen::Index dim() const { return herm_.dim(); }
  const Matrix& mat() const { return herm_.mat(); }
  const HermitianMatrix& herm() const { return herm_; }

 private:
  HermitianMatrix herm_;
};

struct SpectralOperator {
  DensityMatrix p;                  // P(sigma), dim k
  std::vector<Matrix> projectors;   // consecutive-block projectors Pi_j
};

/// P(sigma) = sum_j p_j Pi_j with Pi_j projecting onto consecutive blocks of
/// the computational basis.
SpectralOperator p_sigma(const Spectrum& sigma);

/// Spectrum read off a density matrix: positive eigenvalues clustered at the
/// 1e-8 degeneracy threshold, descending, eigenvalues below 1e-10 dropped.
Spectrum spectrum_of(const DensityMatrix& rho);

/// Uhlmann fidelity F = (Tr sqrt(sqrt(rho0) rho1 sqrt(rho0)))^2, in [0, 1].
double fidelity(const DensityMatrix& rho0, const DensityMatrix& rho1);

/// Bures angle arccos(sqrt(F)), in [0, pi/2].
double bures_angle(const DensityMatrix& rho0, const DensityMatrix& rho1);

/// Closed-form qubit fidelity (p1 - p2)^2 cos^2(a tau) + 4 p1 p2 between the
/// endpoints of the constant-generator qubit geodesic. Requires
/// p1 > p2 > 0 and p1 + p2 = 1.
double qubit_fidelity_closed_form(double p1, double p2, double a_tau);

/// True iff Tr(rho0 rho1) <= 1e-10, equivalent to orthogonal supports.
bool fully_distinguishable(const DensityMatrix& rho0, const DensityMatrix& rho1);

/// U diag(P(sigma), 0) U^dag for a seeded Haar unitary U of size n >= rank.
DensityMatrix random_density(const Spectrum& sigma, int n, std::uint64_t seed);

/// Random spectrum with at most max_levels distinct eigenvalues and rank at
/// most max_rank (at least 1 each). Eigenvalues are separated well above the
/// clustering threshold.
Spectrum random_spectrum(Rng& rng, int max_levels, int max_rank);

}  // namespace qsl
