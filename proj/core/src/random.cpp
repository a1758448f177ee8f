#include "qsl/random.hpp"

#include <cmath>
#include <numbers>

namespace qsl {

double Rng::uniform() {
  // 53 uniform bits -> [0, 1).
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Complex Rng::cnormal() {
  const double s = std::numbers::sqrt2;
  return Complex(normal() / s, normal() / s);
}

std::uint64_t Rng::below(std::uint64_t n) {
  require(n > 0, "Rng::below: empty range");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = gen_();
  while (x >= limit) x = gen_();
  return x % n;
}

Matrix haar_unitary(int n, Rng& rng) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.cnormal();
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0 ? d / mag : Complex(1, 0));
  }
  return q;
}

HermitianMatrix random_hermitian(int n, Rng& rng, double scale) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = scale * rng.cnormal();
  return HermitianMatrix(0.5 * (a + a.adjoint()));
}

AntiHermitianMatrix random_antihermitian(int n, Rng& rng, double scale) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = scale * rng.cnormal();
  return AntiHermitianMatrix(0.5 * (a - a.adjoint()));
}

}  // namespace qsl
