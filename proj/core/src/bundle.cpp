#include "qsl/bundle.hpp"

#include <cmath>
#include <numbers>

namespace qsl {

namespace {

Matrix spectral_diag(const Spectrum& sigma) {
  const int k = sigma.rank();
  Matrix p = Matrix::Zero(k, k);
  for (int i = 0; i < k; ++i) p(i, i) = sigma.level_of_index(i);
  return p;
}

}  // namespace

Purification::Purification(Matrix psi, Spectrum sigma)
    : psi_(std::move(psi)), sigma_(std::move(sigma)) {
  require(psi_.cols() == sigma_.rank(),
          "Purification: psi must have rank(sigma) columns");
  require(psi_.rows() >= psi_.cols(),
          "Purification: ambient dimension below rank");
  const Matrix defect = psi_.adjoint() * psi_ - spectral_diag(sigma_);
  require(defect.norm() <= kBundleTol,
          "Purification: ||psi^dag psi - P(sigma)|| = " +
              std::to_string(defect.norm()));
}

GaugeAlgebraElement::GaugeAlgebraElement(AntiHermitianMatrix xi, Spectrum sigma)
    : xi_(std::move(xi)), sigma_(std::move(sigma)) {
  require(xi_.dim() == sigma_.rank(),
          "GaugeAlgebraElement: dimension must equal rank(sigma)");
  const Matrix p = spectral_diag(sigma_);
  const Matrix comm = xi_.mat() * p - p * xi_.mat();
  require(comm.norm() <= kBundleTol,
          "GaugeAlgebraElement: [xi, P(sigma)] = " + std::to_string(comm.norm()));
}

Purification purify(const DensityMatrix& rho) {
  const Spectrum sigma = spectrum_of(rho);
  const EigHerm ed = eig_herm(rho.herm());
  const int k = sigma.rank();
  Matrix psi(rho.dim(), k);
  for (int j = 0; j < k; ++j)
    psi.col(j) = ed.vectors.col(j) * std::sqrt(std::max(0.0, ed.values(j)));
  return Purification(std::move(psi), sigma);
}

DensityMatrix project(const Purification& psi) {
  return DensityMatrix(HermitianMatrix(psi.mat() * psi.mat().adjoint()));
}

GaugeAlgebraElement connection(const Purification& psi, const Matrix& x) {
  require(x.rows() == psi.ambient_dim() && x.cols() == psi.rank(),
          "connection: X must match the shape of psi");
  const Spectrum& sigma = psi.sigma();
  const int k = sigma.rank();
  // Anti-Hermitian part of psi^dag X; taking it first and extracting blocks
  // afterwards commutes with the P^{-1} weight because P is block scalar.
  const Matrix s = antihermitize(psi.mat().adjoint() * x);
  Matrix a = Matrix::Zero(k, k);
  for (int j = 0; j < sigma.levels(); ++j) {
    const int off = sigma.block_offset(j);
    const int mj = sigma.m()[j];
    a.block(off, off, mj, mj) = s.block(off, off, mj, mj) / sigma.p()[j];
  }
  return GaugeAlgebraElement(AntiHermitianMatrix(std::move(a)), sigma);
}

Split split(const Purification& psi, const Matrix& x) {
  const GaugeAlgebraElement a = connection(psi, x);
  Matrix vertical = psi.mat() * a.mat();
  return Split{x - vertical, std::move(vertical)};
}

double gauge_metric(const GaugeAlgebraElement& xi, const GaugeAlgebraElement& eta) {
  require(xi.sigma().same_as(eta.sigma()),
          "gauge_metric: spectra must agree");
  const Matrix p = spectral_diag(xi.sigma());
  const Complex tr =
      ((xi.mat() * eta.mat() + eta.mat() * xi.mat()) * p).trace();
  return -0.5 * tr.real();
}

double gauge_norm(const GaugeAlgebraElement& xi) {
  return std::sqrt(std::max(0.0, gauge_metric(xi, xi)));
}

std::vector<GaugeAlgebraElement> gauge_basis(const Spectrum& sigma) {
  const int k = sigma.rank();
  std::vector<Matrix> raw;
  for (int j = 0; j < sigma.levels(); ++j) {
    const int off = sigma.block_offset(j);
    const int mj = sigma.m()[j];
    for (int a = 0; a < mj; ++a) {
      Matrix e = Matrix::Zero(k, k);
      e(off + a, off + a) = Complex(0, 1);
      raw.push_back(std::move(e));
    }
    for (int a = 0; a < mj; ++a) {
      for (int b = a + 1; b < mj; ++b) {
        Matrix re = Matrix::Zero(k, k);
        re(off + a, off + b) = 1.0 / std::numbers::sqrt2;
        re(off + b, off + a) = -1.0 / std::numbers::sqrt2;
        raw.push_back(std::move(re));
        Matrix im = Matrix::Zero(k, k);
        im(off + a, off + b) = Complex(0, 1.0 / std::numbers::sqrt2);
        im(off + b, off + a) = Complex(0, 1.0 / std::numbers::sqrt2);
        raw.push_back(std::move(im));
      }
    }
  }
  // Modified Gram-Schmidt under the p_j-weighted metric.
  std::vector<GaugeAlgebraElement> basis;
  basis.reserve(raw.size());
  for (Matrix& candidate : raw) {
    GaugeAlgebraElement elem(AntiHermitianMatrix(candidate), sigma);
    Matrix reduced = elem.mat();
    for (const GaugeAlgebraElement& prev : basis) {
      const double coeff = gauge_metric(
          GaugeAlgebraElement(AntiHermitianMatrix(reduced), sigma), prev);
      reduced -= coeff * prev.mat();
    }
    GaugeAlgebraElement residual(AntiHermitianMatrix(reduced), sigma);
    const double norm = gauge_norm(residual);
    require(norm > 1e-12, "gauge_basis: degenerate candidate");
    basis.emplace_back(AntiHermitianMatrix(reduced / norm), sigma);
  }
  return basis;
}

GaugeAlgebraElement minus_i_identity(const Spectrum& sigma) {
  const int k = sigma.rank();
  return GaugeAlgebraElement(
      AntiHermitianMatrix(Complex(0, -1) * Matrix::Identity(k, k)), sigma);
}

GaugeAlgebraElement xi_field(const Purification& psi, const HermitianMatrix& h,
                             double hbar) {
  require(h.dim() == psi.ambient_dim(), "xi_field: H dimension mismatch");
  require(hbar > 0, "xi_field: hbar must be positive");
  const Matrix x = h.mat() * psi.mat() / Complex(0, hbar);
  return connection(psi, x);
}

GaugeAlgebraElement xi_perp(const GaugeAlgebraElement& xi_h) {
  const GaugeAlgebraElement unit = minus_i_identity(xi_h.sigma());
  const double along = gauge_metric(unit, xi_h);
  return GaugeAlgebraElement(
      AntiHermitianMatrix(xi_h.mat() - along * unit.mat()), xi_h.sigma());
}

QuantumSpeedTerms qspeed_terms(const Purification& psi, const HermitianMatrix& h,
                               double hbar) {
  const DensityMatrix rho = project(psi);
  const Matrix x = h.mat() * psi.mat() / Complex(0, hbar);
  const Split parts = split(psi, x);
  const GaugeAlgebraElement perp = xi_perp(connection(psi, x));

  QuantumSpeedTerms out;
  out.g_xh = hs_forms(parts.horizontal, parts.horizontal).g;
  out.mean_h = (h.mat() * rho.mat()).trace().real();
  const double mean_h2 = (h.mat() * h.mat() * rho.mat()).trace().real();
  out.delta_h_sq = mean_h2 - out.mean_h * out.mean_h;
  out.perp_sq = gauge_metric(perp, perp);
  return out;
}

Eigen::VectorXd metric_momentum(const Purification& psi, const Matrix& psi_dot) {
  require(psi_dot.rows() == psi.ambient_dim() && psi_dot.cols() == psi.rank(),
          "metric_momentum: shape mismatch");
  const std::vector<GaugeAlgebraElement> basis = gauge_basis(psi.sigma());
  Eigen::VectorXd values(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t b = 0; b < basis.size(); ++b)
    values(static_cast<Eigen::Index>(b)) =
        hs_forms(psi_dot, psi.mat() * basis[b].mat()).g;
  return values;
}

}  // namespace qsl
