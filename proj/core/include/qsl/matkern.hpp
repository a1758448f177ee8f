#pragma once

// Dense complex-matrix kernel: Hermitian eigendecompositions, matrix
// functions, Hilbert-Schmidt forms and time-ordered exponentials.
// Everything else in the library builds on these primitives.

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qsl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Relative tolerance for the (anti-)Hermiticity invariant enforced at
// type construction.
inline constexpr double kHermTol = 1e-10;

// Absolute gap below which eigenvalues are treated as a degenerate cluster.
inline constexpr double kDegeneracyTol = 1e-8;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

/// Hermitian matrix. Construction verifies ||A - A^dag||_F <= 1e-10 * max(1, ||A||_F)
/// and stores the symmetrized part (A + A^dag)/2 so Hermiticity cannot drift
/// through long compositions.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(Matrix a);

  static HermitianMatrix zero(Eigen::Index dim) {
    return HermitianMatrix(Matrix::Zero(dim, dim));
  }
  static HermitianMatrix identity(Eigen::Index dim) {
    return HermitianMatrix(Matrix::Identity(dim, dim));
  }

  Eigen::Index dim() const { return mat_.rows(); }
  const Matrix& mat() const { return mat_; }

 private:
  Matrix mat_;
};

/// Anti-Hermitian matrix; mirror image of HermitianMatrix with the
/// invariant ||A + A^dag||_F <= 1e-10 * max(1, ||A||_F).
class AntiHermitianMatrix {
 public:
  explicit AntiHermitianMatrix(Matrix a);

  static AntiHermitianMatrix zero(Eigen::Index dim) {
    return AntiHermitianMatrix(Matrix::Zero(dim, dim));
  }

  Eigen::Index dim() const { return mat_.rows(); }
  const Matrix& mat() const { return mat_; }

 private:
  Matrix mat_;
};

struct EigHerm {
  RealVector values;  // descending
  Matrix vectors;     // unitary, columns match values
};

/// Eigendecomposition A = V diag(values) V^dag with values sorted descending.
EigHerm eig_herm(const HermitianMatrix& a);

struct HsForms {
  double g;      // (1/2) Tr(X^dag Y + Y^dag X)
  double omega;  // (1/2i) Tr(X^dag Y - Y^dag X)
};

/// Real and imaginary parts of the Hilbert-Schmidt inner product.
HsForms hs_forms(const Matrix& x, const Matrix& y);

/// Unitary exponential of an anti-Hermitian matrix, via the
/// eigendecomposition of i*xi.
Matrix exp_antiherm(const AntiHermitianMatrix& xi);

enum class TimeOrder {
  positive,  // later factors multiply on the left  (solves V' = A(t) V)
  negative,  // later factors multiply on the right (solves U' = U A(t))
};

/// Time-ordered exponential of a curve of anti-Hermitian matrices sampled on
/// a uniform grid with spacing dt. Uses per-step exact exponentials of the
/// midpoint samples (averages of adjacent nodes), second-order accurate.
Matrix time_ordered_exp(std::span<const AntiHermitianMatrix> nodes, double dt,
                        TimeOrder order);

// Convenience helpers shared across modules.

/// sqrt of a positive semidefinite Hermitian matrix; negative round-off
/// eigenvalues are clipped at zero.
Matrix sqrt_psd(const HermitianMatrix& a);

inline Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }
inline Matrix antihermitize(const Matrix& a) { return 0.5 * (a - a.adjoint()); }

}  // namespace qsl
