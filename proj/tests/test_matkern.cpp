#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qsl/matkern.hpp"
#include "qsl/random.hpp"

using namespace qsl;

namespace {

Matrix pauli_x() {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

}  // namespace

TEST_CASE("hermitian construction symmetrizes and rejects") {
  Matrix a(2, 2);
  a << 1.0, Complex(0, 1e-12), Complex(0, 1e-12), 2.0;
  const HermitianMatrix h(a);  // tiny defect absorbed
  CHECK((h.mat() - h.mat().adjoint()).norm() == doctest::Approx(0.0));

  Matrix bad(2, 2);
  bad << 1.0, 1.0, -1.0, 1.0;
  CHECK_THROWS_AS(HermitianMatrix{bad}, Error);
  CHECK_NOTHROW(AntiHermitianMatrix{(Matrix(2, 2) << 0, 1, -1, 0).finished()});
}

TEST_CASE("eig_herm on diagonal and Pauli-X") {
  const HermitianMatrix d((Matrix(3, 3) << 1, 0, 0, 0, 3, 0, 0, 0, 2).finished());
  const EigHerm ed = eig_herm(d);
  CHECK(ed.values(0) == doctest::Approx(3.0));
  CHECK(ed.values(1) == doctest::Approx(2.0));
  CHECK(ed.values(2) == doctest::Approx(1.0));

  const EigHerm px = eig_herm(HermitianMatrix(pauli_x()));
  CHECK(px.values(0) == doctest::Approx(1.0));
  CHECK(px.values(1) == doctest::Approx(-1.0));
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  CHECK(std::abs(px.vectors(0, 0)) == doctest::Approx(inv_sqrt2));
  CHECK(std::abs(px.vectors(1, 0)) == doctest::Approx(inv_sqrt2));
}

TEST_CASE("eig_herm reconstruction and unitarity on random input") {
  Rng rng(42);
  const HermitianMatrix a = random_hermitian(6, rng);
  const EigHerm ed = eig_herm(a);
  const Matrix rebuilt =
      ed.vectors * ed.values.cast<Complex>().asDiagonal() * ed.vectors.adjoint();
  CHECK((rebuilt - a.mat()).norm() <= 1e-11 * a.mat().norm());
  CHECK((ed.vectors.adjoint() * ed.vectors - Matrix::Identity(6, 6)).norm() <=
        1e-11);
}

TEST_CASE("hs_forms on matrix units") {
  Matrix e11 = Matrix::Zero(2, 2);
  e11(0, 0) = 1;
  Matrix e22 = Matrix::Zero(2, 2);
  e22(1, 1) = 1;

  const HsForms same = hs_forms(e11, e11);
  CHECK(same.g == doctest::Approx(1.0));
  CHECK(same.omega == doctest::Approx(0.0));

  const HsForms ortho = hs_forms(e11, e22);
  CHECK(ortho.g == doctest::Approx(0.0));
  CHECK(ortho.omega == doctest::Approx(0.0));

  const HsForms skew = hs_forms(Complex(0, 1) * e11, e11);
  CHECK(skew.g == doctest::Approx(0.0));
  CHECK(skew.omega == doctest::Approx(-1.0));

  CHECK_THROWS_AS(hs_forms(e11, Matrix::Zero(3, 3)), Error);
}

TEST_CASE("hs_forms positivity and antisymmetry properties") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix x(3, 2), y(3, 2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) {
        x(i, j) = rng.cnormal();
        y(i, j) = rng.cnormal();
      }
    CHECK(hs_forms(x, x).g >= 0.0);
    CHECK(hs_forms(x, x).omega == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(hs_forms(x, y).g == doctest::Approx(hs_forms(y, x).g));
    CHECK(hs_forms(x, y).omega == doctest::Approx(-hs_forms(y, x).omega));
  }
  CHECK(hs_forms(Matrix::Zero(3, 3), Matrix::Zero(3, 3)).g == 0.0);
}

TEST_CASE("exp_antiherm closed forms and unitarity") {
  CHECK((exp_antiherm(AntiHermitianMatrix::zero(3)) - Matrix::Identity(3, 3))
            .norm() <= 1e-14);

  // exp(i (pi/2) X) = i X for the Pauli matrix X.
  const AntiHermitianMatrix xi(Complex(0, std::numbers::pi / 2) * pauli_x());
  const Matrix expected = Complex(0, 1) * pauli_x();
  CHECK((exp_antiherm(xi) - expected).norm() <= 1e-12);

  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const AntiHermitianMatrix a = random_antihermitian(4, rng);
    const Matrix u = exp_antiherm(a);
    const Matrix v = exp_antiherm(AntiHermitianMatrix(-a.mat()));
    CHECK((u * v - Matrix::Identity(4, 4)).norm() <= 1e-11);
    CHECK((u.adjoint() * u - Matrix::Identity(4, 4)).norm() <= 1e-10);
  }
}

TEST_CASE("time_ordered_exp reduces to exp for commuting families") {
  Rng rng(3);
  const AntiHermitianMatrix xi0 = random_antihermitian(3, rng);
  const int nodes = 101;
  const double t_total = 0.8;
  const double dt = t_total / (nodes - 1);

  std::vector<AntiHermitianMatrix> constant(nodes, xi0);
  const Matrix u_const = time_ordered_exp(constant, dt, TimeOrder::positive);
  CHECK((u_const - exp_antiherm(AntiHermitianMatrix(t_total * xi0.mat()))).norm() <=
        1e-12);

  // xi(t) = f(t) xi0 integrates to exp(int f dt * xi0); f linear makes the
  // midpoint rule exact.
  std::vector<AntiHermitianMatrix> scaled;
  double integral = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const double f = 1.0 + 2.0 * (j * dt);
    scaled.push_back(AntiHermitianMatrix(f * xi0.mat()));
  }
  integral = t_total + t_total * t_total;  // int (1 + 2t) dt
  const Matrix u_scaled = time_ordered_exp(scaled, dt, TimeOrder::negative);
  CHECK((u_scaled - exp_antiherm(AntiHermitianMatrix(integral * xi0.mat()))).norm() <=
        1e-10);
}

TEST_CASE("time_ordered_exp non-commuting refinement and ordering") {
  Rng rng(5);
  const AntiHermitianMatrix a = random_antihermitian(2, rng);
  const AntiHermitianMatrix b = random_antihermitian(2, rng);
  const auto sample = [&](int nodes) {
    std::vector<AntiHermitianMatrix> xs;
    xs.reserve(nodes);
    for (int j = 0; j < nodes; ++j) {
      const double t = static_cast<double>(j) / (nodes - 1);
      xs.push_back(AntiHermitianMatrix(std::cos(3 * t) * a.mat() +
                                       std::sin(2 * t) * b.mat()));
    }
    return xs;
  };

  const auto coarse = sample(1001);
  const auto fine = sample(100001);
  const Matrix u0 = time_ordered_exp(coarse, 1.0 / 1000, TimeOrder::positive);
  const Matrix u1 = time_ordered_exp(fine, 1.0 / 100000, TimeOrder::positive);
  CHECK((u0 - u1).norm() <= 1e-6);
  CHECK((u0.adjoint() * u0 - Matrix::Identity(2, 2)).norm() <= 1e-10);

  // Positive ordering of the curve equals negative ordering of the
  // time-reversed curve.
  auto reversed = coarse;
  std::reverse(reversed.begin(), reversed.end());
  const Matrix neg = time_ordered_exp(reversed, 1.0 / 1000, TimeOrder::negative);
  CHECK((u0 - neg).norm() <= 1e-12);

  CHECK_THROWS_AS(
      time_ordered_exp(std::vector<AntiHermitianMatrix>{a}, 0.1, TimeOrder::positive),
      Error);
}
