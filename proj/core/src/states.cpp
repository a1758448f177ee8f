#include "qsl/states.hpp"

#include <algorithm>
#include <cmath>

namespace qsl {

Spectrum::Spectrum(std::vector<double> p, std::vector<int> m)
    : p_(std::move(p)), m_(std::move(m)) {
  require(!p_.empty() && p_.size() == m_.size(),
          "Spectrum: p and m must be non-empty and of equal length");
  double mass = 0.0;
  for (std::size_t j = 0; j < p_.size(); ++j) {
    require(p_[j] > 0.0, "Spectrum: eigenvalues must be positive");
    require(m_[j] >= 1, "Spectrum: multiplicities must be positive");
    if (j > 0)
      require(p_[j] < p_[j - 1], "Spectrum: eigenvalues must be strictly descending");
    mass += p_[j] * m_[j];
    rank_ += m_[j];
  }
  require(std::abs(mass - 1.0) <= 1e-10,
          "Spectrum: eigenvalue mass " + std::to_string(mass) + " != 1");
}

double Spectrum::level_of_index(int i) const {
  require(i >= 0 && i < rank_, "Spectrum: index out of range");
  int off = 0;
  for (std::size_t j = 0; j < m_.size(); ++j) {
    off += m_[j];
    if (i < off) return p_[j];
  }
  return p_.back();
}

int Spectrum::block_offset(int j) const {
  int off = 0;
  for (int b = 0; b < j; ++b) off += m_[b];
  return off;
}

bool Spectrum::same_as(const Spectrum& other, double tol) const {
  if (m_ != other.m_) return false;
  for (std::size_t j = 0; j < p_.size(); ++j)
    if (std::abs(p_[j] - other.p_[j]) > tol) return false;
  return true;
}

DensityMatrix::DensityMatrix(HermitianMatrix a) : herm_(std::move(a)) {
  const Complex tr = herm_.mat().trace();
  require(std::abs(tr - Complex(1, 0)) <= 1e-10,
          "DensityMatrix: trace must be 1");
  const EigHerm ed = eig_herm(herm_);
  require(ed.values.minCoeff() >= -1e-10,
          "DensityMatrix: negative eigenvalue " +
              std::to_string(ed.values.minCoeff()));
}

SpectralOperator p_sigma(const Spectrum& sigma) {
  const int k = sigma.rank();
  Matrix p = Matrix::Zero(k, k);
  std::vector<Matrix> projectors;
  projectors.reserve(sigma.levels());
  for (int j = 0; j < sigma.levels(); ++j) {
    Matrix pi = Matrix::Zero(k, k);
    const int off = sigma.block_offset(j);
    for (int i = 0; i < sigma.m()[j]; ++i) pi(off + i, off + i) = 1.0;
    p += sigma.p()[j] * pi;
    projectors.push_back(std::move(pi));
  }
  return SpectralOperator{DensityMatrix(HermitianMatrix(p)), std::move(projectors)};
}

Spectrum spectrum_of(const DensityMatrix& rho) {
  const EigHerm ed = eig_herm(rho.herm());
  std::vector<double> kept;
  for (Eigen::Index i = 0; i < ed.values.size(); ++i)
    if (ed.values(i) >= kNullEigenvalue) kept.push_back(ed.values(i));
  require(!kept.empty(), "spectrum_of: state has no positive eigenvalues");

  std::vector<double> p;
  std::vector<int> m;
  double cluster_sum = kept[0];
  int cluster_count = 1;
  for (std::size_t i = 1; i < kept.size(); ++i) {
    if (kept[i - 1] - kept[i] > kDegeneracyTol) {
      p.push_back(cluster_sum / cluster_count);
      m.push_back(cluster_count);
      cluster_sum = kept[i];
      cluster_count = 1;
    } else {
      cluster_sum += kept[i];
      ++cluster_count;
    }
  }
  p.push_back(cluster_sum / cluster_count);
  m.push_back(cluster_count);

  // Repair the round-off mass lost to the zero-eigenvalue cut.
  double mass = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) mass += p[j] * m[j];
  if (std::abs(mass - 1.0) > 1e-10 && std::abs(mass - 1.0) <= 1e-8)
    for (double& v : p) v /= mass;

  return Spectrum(std::move(p), std::move(m));
}

double fidelity(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  require(rho0.dim() == rho1.dim(), "fidelity: dimension mismatch");
  const Matrix root = sqrt_psd(rho0.herm());
  const HermitianMatrix inner(root * rho1.mat() * root);
  const EigHerm ed = eig_herm(inner);
  // Round-off on exact zero modes would be amplified by the square root;
  // clip everything at round-off scale, not just negatives.
  const double cut = 1e-13 * std::max(1.0, inner.mat().norm());
  double sum = 0.0;
  for (Eigen::Index i = 0; i < ed.values.size(); ++i)
    if (ed.values(i) > cut) sum += std::sqrt(ed.values(i));
  return std::min(1.0, sum * sum);
}

double bures_angle(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  const double f = fidelity(rho0, rho1);
  return std::acos(std::sqrt(std::clamp(f, 0.0, 1.0)));
}

double qubit_fidelity_closed_form(double p1, double p2, double a_tau) {
  require(p1 > p2 && p2 > 0, "qubit_fidelity_closed_form: need p1 > p2 > 0");
  require(std::abs(p1 + p2 - 1.0) <= 1e-10,
          "qubit_fidelity_closed_form: probabilities must sum to 1");
  const double c = std::cos(a_tau);
  return (p1 - p2) * (p1 - p2) * c * c + 4.0 * p1 * p2;
}

bool fully_distinguishable(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  require(rho0.dim() == rho1.dim(), "fully_distinguishable: dimension mismatch");
  const Complex overlap = (rho0.mat() * rho1.mat()).trace();
  return overlap.real() <= 1e-10;
}

DensityMatrix random_density(const Spectrum& sigma, int n, std::uint64_t seed) {
  require(n >= sigma.rank(), "random_density: n must be at least rank(sigma)");
  Rng rng(seed);
  const Matrix u = haar_unitary(n, rng);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < sigma.rank(); ++i) diag(i) = sigma.level_of_index(i);
  const Matrix rho = u * diag.cast<Complex>().asDiagonal() * u.adjoint();
  return DensityMatrix(HermitianMatrix(rho));
}

Spectrum random_spectrum(Rng& rng, int max_levels, int max_rank) {
  require(max_levels >= 1 && max_rank >= 1, "random_spectrum: bad limits");
  const int l = 1 + static_cast<int>(rng.below(
      static_cast<std::uint64_t>(std::min(max_levels, max_rank))));
  std::vector<int> m(l, 1);
  int k = l;
  while (k < max_rank && rng.uniform() < 0.5) {
    ++m[rng.below(l)];
    ++k;
  }
  // Geometric ladder of raw weights; the factor-3 ratio dominates the
  // per-level jitter, so the normalized values stay strictly descending with
  // gaps far above the clustering threshold.
  std::vector<double> p(l);
  double mass = 0.0;
  for (int j = 0; j < l; ++j) {
    p[j] = std::pow(3.0, l - j) * (0.7 + 0.6 * rng.uniform());
    mass += p[j] * m[j];
  }
  for (double& v : p) v /= mass;
  return Spectrum(std::move(p), std::move(m));
}

}  // namespace qsl
