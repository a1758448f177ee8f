#include "qsl/matkern.hpp"

#include <algorithm>
#include <cmath>

namespace qsl {

namespace {

void check_square(const Matrix& a, const char* what) {
  require(a.rows() == a.cols() && a.rows() > 0,
          std::string(what) + ": square matrix required");
}

}  // namespace

HermitianMatrix::HermitianMatrix(Matrix a) {
  check_square(a, "HermitianMatrix");
  const double scale = std::max(1.0, a.norm());
  const double defect = (a - a.adjoint()).norm();
  require(defect <= kHermTol * scale,
          "HermitianMatrix: Hermiticity defect " + std::to_string(defect) +
              " exceeds tolerance");
  mat_ = 0.5 * (a + a.adjoint());
}

AntiHermitianMatrix::AntiHermitianMatrix(Matrix a) {
  check_square(a, "AntiHermitianMatrix");
  const double scale = std::max(1.0, a.norm());
  const double defect = (a + a.adjoint()).norm();
  require(defect <= kHermTol * scale,
          "AntiHermitianMatrix: anti-Hermiticity defect " +
              std::to_string(defect) + " exceeds tolerance");
  mat_ = 0.5 * (a - a.adjoint());
}

EigHerm eig_herm(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.mat());
  require(solver.info() == Eigen::Success, "eig_herm: solver failed");
  const Eigen::Index n = a.dim();
  // Eigen sorts ascending; flip to descending.
  EigHerm out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  (void)n;
  return out;
}

HsForms hs_forms(const Matrix& x, const Matrix& y) {
  require(x.rows() == y.rows() && x.cols() == y.cols(),
          "hs_forms: shape mismatch");
  const Complex t = (x.adjoint() * y).trace();
  // Tr(Y^dag X) = conj(Tr(X^dag Y)), so both forms come from one trace.
  return HsForms{t.real(), t.imag()};
}

Matrix exp_antiherm(const AntiHermitianMatrix& xi) {
  // i*xi is Hermitian; exp(xi) = V exp(-i diag) V^dag.
  const HermitianMatrix h(Complex(0, 1) * xi.mat());
  const EigHerm ed = eig_herm(h);
  const Eigen::Index n = xi.dim();
  Eigen::VectorXcd phases(n);
  for (Eigen::Index j = 0; j < n; ++j)
    phases(j) = std::exp(Complex(0, -ed.values(j)));
  return ed.vectors * phases.asDiagonal() * ed.vectors.adjoint();
}

Matrix time_ordered_exp(std::span<const AntiHermitianMatrix> nodes, double dt,
                        TimeOrder order) {
  require(nodes.size() >= 2, "time_ordered_exp: need at least 2 grid samples");
  require(dt > 0, "time_ordered_exp: dt must be positive");
  const Eigen::Index n = nodes[0].dim();
  Matrix u = Matrix::Identity(n, n);
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    require(nodes[j + 1].dim() == n, "time_ordered_exp: dimension mismatch");
    const AntiHermitianMatrix mid(0.5 * (nodes[j].mat() + nodes[j + 1].mat()));
    const Matrix step = exp_antiherm(AntiHermitianMatrix(mid.mat() * dt));
    if (order == TimeOrder::positive)
      u = step * u;
    else
      u = u * step;
  }
  return u;
}

Matrix sqrt_psd(const HermitianMatrix& a) {
  const EigHerm ed = eig_herm(a);
  Eigen::VectorXcd roots(a.dim());
  for (Eigen::Index j = 0; j < a.dim(); ++j)
    roots(j) = std::sqrt(std::max(0.0, ed.values(j)));
  return ed.vectors * roots.asDiagonal() * ed.vectors.adjoint();
}

}  // namespace qsl
