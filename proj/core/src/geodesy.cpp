#include "qsl/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <optional>

namespace qsl {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

std::vector<Matrix> antihermitian_basis(int n) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    Matrix e = Matrix::Zero(n, n);
    e(j, j) = Complex(0, 1);
    basis.push_back(std::move(e));
  }
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      Matrix re = Matrix::Zero(n, n);
      re(j, k) = 1.0 / std::numbers::sqrt2;
      re(k, j) = -1.0 / std::numbers::sqrt2;
      basis.push_back(std::move(re));
      Matrix im = Matrix::Zero(n, n);
      im(j, k) = Complex(0, 1.0 / std::numbers::sqrt2);
      im(k, j) = Complex(0, 1.0 / std::numbers::sqrt2);
      basis.push_back(std::move(im));
    }
  }
  return basis;
}

double star_inner_raw(const Matrix& xi, const Matrix& eta, const Matrix& rho0) {
  return -0.5 * ((xi * eta + eta * xi) * rho0).trace().real();
}

}  // namespace

StarMetric::StarMetric(const DensityMatrix& rho0)
    : rho0_(rho0), basis_(antihermitian_basis(static_cast<int>(rho0.dim()))) {
  const EigHerm ed = eig_herm(rho0.herm());
  require(ed.values.minCoeff() > kNullEigenvalue,
          "StarMetric: rho0 must be invertible");
  const auto d = static_cast<Eigen::Index>(basis_.size());
  Eigen::MatrixXd gram(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = a; b < d; ++b) {
      gram(a, b) = star_inner_raw(basis_[a], basis_[b], rho0.mat());
      gram(b, a) = gram(a, b);
    }
  gram_.compute(gram);
  require(gram_.info() == Eigen::Success && gram_.vectorD().minCoeff() > 0,
          "StarMetric: Gram matrix is not positive definite");
}

double StarMetric::inner(const AntiHermitianMatrix& xi,
                         const AntiHermitianMatrix& eta) const {
  require(xi.dim() == rho0_.dim() && eta.dim() == rho0_.dim(),
          "StarMetric: dimension mismatch");
  return star_inner_raw(xi.mat(), eta.mat(), rho0_.mat());
}

AntiHermitianMatrix StarMetric::coadjoint(const AntiHermitianMatrix& xi) const {
  const auto d = static_cast<Eigen::Index>(basis_.size());
  const Matrix& x = xi.mat();
  Eigen::VectorXd rhs(d);
  for (Eigen::Index a = 0; a < d; ++a) {
    const Matrix bracket = x * basis_[a] - basis_[a] * x;
    rhs(a) = star_inner_raw(x, bracket, rho0_.mat());
  }
  const Eigen::VectorXd coeff = gram_.solve(rhs);
  Matrix zeta = Matrix::Zero(x.rows(), x.cols());
  for (Eigen::Index a = 0; a < d; ++a) zeta += coeff(a) * basis_[a];
  return AntiHermitianMatrix(std::move(zeta));
}

double star_metric(const AntiHermitianMatrix& xi, const AntiHermitianMatrix& eta,
                   const DensityMatrix& rho0) {
  require(xi.dim() == rho0.dim() && eta.dim() == rho0.dim(),
          "star_metric: dimension mismatch");
  const EigHerm ed = eig_herm(rho0.herm());
  require(ed.values.minCoeff() > kNullEigenvalue,
          "star_metric: rho0 must be invertible");
  return star_inner_raw(xi.mat(), eta.mat(), rho0.mat());
}

AntiHermitianMatrix coadjoint_term(const AntiHermitianMatrix& xi,
                                   const StarMetric& metric) {
  return metric.coadjoint(xi);
}

// ---------------------------------------------------------------------------
// Euler-Arnold integration
// ---------------------------------------------------------------------------

namespace {

// Cubic Hermite value at relative position theta in [0, 1].
Matrix hermite(const Matrix& y0, const Matrix& d0, const Matrix& y1,
               const Matrix& d1, double dt, double theta) {
  const double t2 = theta * theta;
  const double t3 = t2 * theta;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + theta) * dt * d0 +
         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * dt * d1;
}

}  // namespace

EulerArnoldFlow euler_arnold_integrate(const AntiHermitianMatrix& xi0,
                                       const DensityMatrix& rho0, double duration,
                                       int steps, double hbar) {
  require(steps >= 1, "euler_arnold_integrate: need at least one step");
  require(duration > 0, "euler_arnold_integrate: duration must be positive");
  require(xi0.dim() == rho0.dim(), "euler_arnold_integrate: dimension mismatch");
  const StarMetric metric(rho0);
  const double dt = duration / steps;
  const Eigen::Index n = rho0.dim();

  const auto field = [&](const Matrix& x) {
    return metric.coadjoint(AntiHermitianMatrix(antihermitize(x))).mat();
  };

  // Gauss nodes and the fourth-order commutator-free weights for U' = U xi.
  const double c1 = 0.5 - kSqrt3 / 6.0;
  const double c2 = 0.5 + kSqrt3 / 6.0;
  const double wa = 0.25 - kSqrt3 / 6.0;
  const double wb = 0.25 + kSqrt3 / 6.0;

  EulerArnoldFlow flow{{}, {}, {}, HamiltonianCurve::constant(
      HermitianMatrix::zero(n), duration, steps + 1)};
  flow.times.resize(steps + 1);
  flow.xi.reserve(steps + 1);
  flow.unitaries.reserve(steps + 1);

  Matrix xi = xi0.mat();
  Matrix u = Matrix::Identity(n, n);
  Matrix slope = field(xi);
  flow.times[0] = 0.0;
  flow.xi.push_back(AntiHermitianMatrix(xi));
  flow.unitaries.push_back(u);

  std::vector<HermitianMatrix> h_samples;
  h_samples.reserve(steps + 1);
  h_samples.push_back(HermitianMatrix(Complex(0, hbar) * u * xi * u.adjoint()));

  for (int j = 0; j < steps; ++j) {
    const Matrix k1 = slope;
    const Matrix k2 = field(xi + 0.5 * dt * k1);
    const Matrix k3 = field(xi + 0.5 * dt * k2);
    const Matrix k4 = field(xi + dt * k3);
    const Matrix xi_next =
        antihermitize(xi + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4));
    const Matrix slope_next = field(xi_next);

    const Matrix g1 = hermite(xi, k1, xi_next, slope_next, dt, c1);
    const Matrix g2 = hermite(xi, k1, xi_next, slope_next, dt, c2);
    u = u * exp_antiherm(AntiHermitianMatrix(
            antihermitize(dt * (wb * g1 + wa * g2)))) *
        exp_antiherm(AntiHermitianMatrix(
            antihermitize(dt * (wa * g1 + wb * g2))));

    xi = xi_next;
    slope = slope_next;
    flow.times[j + 1] = dt * (j + 1);
    flow.xi.push_back(AntiHermitianMatrix(xi));
    flow.unitaries.push_back(u);
    h_samples.push_back(HermitianMatrix(Complex(0, hbar) * u * xi * u.adjoint()));
  }

  flow.hamiltonian = HamiltonianCurve(flow.times, std::move(h_samples));
  return flow;
}

double horizontality_check(const AntiHermitianMatrix& xi, const Purification& psi0) {
  require(xi.dim() == psi0.ambient_dim(), "horizontality_check: dimension mismatch");
  return gauge_norm(connection(psi0, xi.mat() * psi0.mat()));
}

AntiHermitianMatrix horizontal_generator(const AntiHermitianMatrix& xi,
                                         const Purification& psi0) {
  require(xi.dim() == psi0.ambient_dim(), "horizontal_generator: dimension mismatch");
  const GaugeAlgebraElement a = connection(psi0, xi.mat() * psi0.mat());
  Matrix weighted = a.mat();
  for (Eigen::Index b = 0; b < weighted.cols(); ++b)
    weighted.col(b) /= psi0.sigma().level_of_index(static_cast<int>(b));
  const Matrix vertical = psi0.mat() * weighted * psi0.mat().adjoint();
  return AntiHermitianMatrix(xi.mat() - vertical);
}

TwoEigenvaluePoint two_eigenvalue_geodesic(double p1, double p2, int m1, int m2,
                                           const AntiHermitianMatrix& xi, double t) {
  require(m1 >= 1 && m2 >= 1, "two_eigenvalue_geodesic: bad multiplicities");
  const Spectrum sigma({p1, p2}, {m1, m2});
  const int n = m1 + m2;
  require(xi.dim() == n, "two_eigenvalue_geodesic: xi dimension mismatch");
  const double diag_blocks = xi.mat().topLeftCorner(m1, m1).norm() +
                             xi.mat().bottomRightCorner(m2, m2).norm();
  require(diag_blocks <= 1e-12 * std::max(1.0, xi.mat().norm()),
          "two_eigenvalue_geodesic: xi must be off-diagonal-block");

  Matrix psi0 = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    psi0(i, i) = std::sqrt(i < m1 ? p1 : p2);

  Matrix psi;
  if (m1 == 1 && m2 == 1) {
    // Qubit closed form: xi = [[0, a e^{i theta}], [-a e^{-i theta}, 0]].
    const Complex top = xi.mat()(0, 1);
    const double a = std::abs(top);
    const Complex phase = a > 0 ? top / a : Complex(1, 0);
    const double c = std::cos(a * t);
    const double s = std::sin(a * t);
    psi = Matrix(2, 2);
    psi(0, 0) = std::sqrt(p1) * c;
    psi(0, 1) = std::sqrt(p2) * phase * s;
    psi(1, 0) = -std::sqrt(p1) * std::conj(phase) * s;
    psi(1, 1) = std::sqrt(p2) * c;
  } else {
    psi = exp_antiherm(AntiHermitianMatrix(t * xi.mat())) * psi0;
  }
  DensityMatrix rho(HermitianMatrix(psi * psi.adjoint()));
  return TwoEigenvaluePoint{std::move(psi), std::move(rho)};
}

// ---------------------------------------------------------------------------
// Geodesic shooting
// ---------------------------------------------------------------------------

namespace {

// Derivative-free Nelder-Mead with simplex restarts, followed by a compass
// polish. Deterministic for fixed inputs.
struct MinimizeResult {
  Eigen::VectorXd x;
  double fx = 0.0;
};

template <typename F>
MinimizeResult minimize(const F& f, const Eigen::VectorXd& x0, double radius,
                        int max_evals, double target) {
  const int d = static_cast<int>(x0.size());
  int evals = 0;
  Eigen::VectorXd best_x = x0;
  double best_f = f(x0);
  ++evals;

  double r = radius;
  while (evals < max_evals && best_f > target && r > 1e-12) {
    // One Nelder-Mead run around the incumbent.
    std::vector<Eigen::VectorXd> xs(d + 1, best_x);
    std::vector<double> fs(d + 1);
    fs[0] = best_f;
    for (int i = 0; i < d; ++i) {
      xs[i + 1](i) += r;
      fs[i + 1] = f(xs[i + 1]);
      ++evals;
    }
    while (evals < max_evals) {
      std::vector<int> order(d + 1);
      for (int i = 0; i <= d; ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return fs[a] < fs[b]; });
      if (fs[order[0]] <= target) break;
      // Simplex collapsed: restart with a smaller radius.
      if ((xs[order[d]] - xs[order[0]]).norm() < 1e-13) break;

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
      for (int i = 0; i < d; ++i) centroid += xs[order[i]];
      centroid /= d;
      const int worst = order[d];

      const Eigen::VectorXd refl = centroid + (centroid - xs[worst]);
      const double f_refl = f(refl);
      ++evals;
      if (f_refl < fs[order[0]]) {
        const Eigen::VectorXd expa = centroid + 2.0 * (centroid - xs[worst]);
        const double f_expa = f(expa);
        ++evals;
        if (f_expa < f_refl) {
          xs[worst] = expa;
          fs[worst] = f_expa;
        } else {
          xs[worst] = refl;
          fs[worst] = f_refl;
        }
      } else if (f_refl < fs[order[d - 1]]) {
        xs[worst] = refl;
        fs[worst] = f_refl;
      } else {
        const Eigen::VectorXd contr = centroid + 0.5 * (xs[worst] - centroid);
        const double f_contr = f(contr);
        ++evals;
        if (f_contr < fs[worst]) {
          xs[worst] = contr;
          fs[worst] = f_contr;
        } else {
          for (int i = 1; i <= d; ++i) {
            xs[order[i]] = xs[order[0]] + 0.5 * (xs[order[i]] - xs[order[0]]);
            fs[order[i]] = f(xs[order[i]]);
            ++evals;
            if (evals >= max_evals) break;
          }
        }
      }
    }
    for (int i = 0; i <= d; ++i) {
      if (fs[i] < best_f) {
        best_f = fs[i];
        best_x = xs[i];
      }
    }
    r *= 0.1;
  }

  // Compass polish: axis moves with a shrinking step.
  double step = std::max(1e-8, r);
  while (evals < max_evals && best_f > target && step > 1e-12) {
    bool improved = false;
    for (int i = 0; i < d && evals < max_evals; ++i) {
      for (const double sgn : {1.0, -1.0}) {
        Eigen::VectorXd trial = best_x;
        trial(i) += sgn * step;
        const double ft = f(trial);
        ++evals;
        if (ft < best_f) {
          best_f = ft;
          best_x = trial;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return MinimizeResult{best_x, best_f};
}

// Shared shooting context: the eigenframe of rho0, the block structure of the
// spectrum, and a G-orthonormal basis of horizontal velocity generators.
struct ShootContext {
  Spectrum sigma;
  int n = 0;
  int k = 0;
  bool invertible = false;
  Matrix frame;               // V with rho0 = V diag(lambda) V^dag, descending
  Eigen::VectorXd lambda;     // raw eigenvalues, descending
  Matrix psi0;                // n x k purification V sqrt(lambda)
  std::vector<Matrix> basis;  // horizontal generators xi_a in u(n)
  Matrix sqrt_rho1;           // for fast Bures evaluations
  DensityMatrix rho0;
  DensityMatrix rho1;

  ShootContext(const DensityMatrix& r0, const DensityMatrix& r1)
      : sigma(spectrum_of(r0)), rho0(r0), rho1(r1) {
    require(sigma.same_as(spectrum_of(r1)),
            "geodesic_shoot: states are not isospectral");
    n = static_cast<int>(r0.dim());
    k = sigma.rank();
    invertible = (k == n);

    const EigHerm ed = eig_herm(r0.herm());
    frame = ed.vectors;
    lambda = ed.values;
    psi0 = Matrix(n, k);
    for (int j = 0; j < k; ++j)
      psi0.col(j) = frame.col(j) * std::sqrt(std::max(0.0, lambda(j)));
    sqrt_rho1 = sqrt_psd(r1.herm());

    // Block index ranges: the sigma blocks followed by the null block.
    std::vector<std::pair<int, int>> blocks;
    for (int j = 0; j < sigma.levels(); ++j)
      blocks.emplace_back(sigma.block_offset(j), sigma.m()[j]);
    if (!invertible) blocks.emplace_back(k, n - k);

    // Horizontal generators connect distinct blocks; scaling by
    // 1/sqrt(lambda_r + lambda_s) makes their fundamental fields
    // G-orthonormal (equivalently star-orthonormal when invertible).
    for (std::size_t jb = 0; jb < blocks.size(); ++jb) {
      for (std::size_t kb = jb + 1; kb < blocks.size(); ++kb) {
        for (int r = blocks[jb].first; r < blocks[jb].first + blocks[jb].second; ++r) {
          for (int s = blocks[kb].first; s < blocks[kb].first + blocks[kb].second;
               ++s) {
            const double lr = r < k ? sigma.level_of_index(r) : 0.0;
            const double ls = s < k ? sigma.level_of_index(s) : 0.0;
            if (lr + ls <= 0) continue;  // null-null pair carries no velocity
            const double scale = 1.0 / std::sqrt(lr + ls);
            Matrix re = Matrix::Zero(n, n);
            re(r, s) = scale;
            re(s, r) = -scale;
            basis.push_back(frame * re * frame.adjoint());
            Matrix im = Matrix::Zero(n, n);
            im(r, s) = Complex(0, scale);
            im(s, r) = Complex(0, scale);
            basis.push_back(frame * im * frame.adjoint());
          }
        }
      }
    }
  }

  Matrix combine(const Eigen::VectorXd& c) const {
    Matrix xi = Matrix::Zero(n, n);
    for (Eigen::Index a = 0; a < c.size(); ++a) xi += c(a) * basis[a];
    return xi;
  }

  double bures_to_target(const Matrix& rho_end) const {
    const HermitianMatrix inner(sqrt_rho1 * rho_end * sqrt_rho1);
    const EigHerm ed = eig_herm(inner);
    const double cut = 1e-13 * std::max(1.0, inner.mat().norm());
    double sum = 0.0;
    for (Eigen::Index i = 0; i < ed.values.size(); ++i)
      if (ed.values(i) > cut) sum += std::sqrt(ed.values(i));
    const double f = std::clamp(sum * sum, 0.0, 1.0);
    return std::acos(std::sqrt(f));
  }
};

// Endpoint of the geodesic with initial generator xi over unit duration.
// Invertible case: Euler-Arnold reduction. Rank-deficient case: the
// purification-space geodesic equation psi'' = psi W with
// P W + W P = -2 psi'^dag psi', integrated by RK4.
Matrix shoot_endpoint(const ShootContext& ctx, const StarMetric* metric,
                      const Matrix& xi, int steps) {
  if (ctx.invertible) {
    const double dt = 1.0 / steps;
    const double c1 = 0.5 - kSqrt3 / 6.0;
    const double c2 = 0.5 + kSqrt3 / 6.0;
    const double wa = 0.25 - kSqrt3 / 6.0;
    const double wb = 0.25 + kSqrt3 / 6.0;
    const auto field = [&](const Matrix& x) {
      return metric->coadjoint(AntiHermitianMatrix(antihermitize(x))).mat();
    };
    Matrix x = xi;
    Matrix u = Matrix::Identity(ctx.n, ctx.n);
    Matrix slope = field(x);
    for (int j = 0; j < steps; ++j) {
      const Matrix k1 = slope;
      const Matrix k2 = field(x + 0.5 * dt * k1);
      const Matrix k3 = field(x + 0.5 * dt * k2);
      const Matrix k4 = field(x + dt * k3);
      const Matrix x_next = antihermitize(x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4));
      const Matrix slope_next = field(x_next);
      const Matrix g1 = hermite(x, k1, x_next, slope_next, dt, c1);
      const Matrix g2 = hermite(x, k1, x_next, slope_next, dt, c2);
      u = u * exp_antiherm(AntiHermitianMatrix(antihermitize(dt * (wb * g1 + wa * g2)))) *
          exp_antiherm(AntiHermitianMatrix(antihermitize(dt * (wa * g1 + wb * g2))));
      x = x_next;
      slope = slope_next;
    }
    return u * ctx.rho0.mat() * u.adjoint();
  }

  // Constraint force: W solves P W + W P = -2 phi^dag phi elementwise in the
  // computational basis, since P is diagonal.
  const auto constraint_force = [&](const Matrix& phi) {
    Matrix w = -2.0 * (phi.adjoint() * phi);
    for (int r = 0; r < ctx.k; ++r)
      for (int s = 0; s < ctx.k; ++s)
        w(r, s) /= ctx.sigma.level_of_index(r) + ctx.sigma.level_of_index(s);
    return w;
  };
  const double dt = 1.0 / steps;
  Matrix psi = ctx.psi0;
  Matrix phi = xi * ctx.psi0;
  for (int j = 0; j < steps; ++j) {
    const Matrix ka_psi = phi;
    const Matrix ka_phi = psi * constraint_force(phi);
    const Matrix psi_b = psi + 0.5 * dt * ka_psi;
    const Matrix phi_b = phi + 0.5 * dt * ka_phi;
    const Matrix kb_psi = phi_b;
    const Matrix kb_phi = psi_b * constraint_force(phi_b);
    const Matrix psi_c = psi + 0.5 * dt * kb_psi;
    const Matrix phi_c = phi + 0.5 * dt * kb_phi;
    const Matrix kc_psi = phi_c;
    const Matrix kc_phi = psi_c * constraint_force(phi_c);
    const Matrix psi_d = psi + dt * kc_psi;
    const Matrix phi_d = phi + dt * kc_phi;
    const Matrix kd_psi = phi_d;
    const Matrix kd_phi = psi_d * constraint_force(phi_d);
    psi += (dt / 6.0) * (ka_psi + 2 * kb_psi + 2 * kc_psi + kd_psi);
    phi += (dt / 6.0) * (ka_phi + 2 * kb_phi + 2 * kc_phi + kd_phi);
  }
  return psi * psi.adjoint();
}

struct StartOutcome {
  double objective = std::numeric_limits<double>::infinity();
  Eigen::VectorXd coeff;
};

}  // namespace

GeodesicResult geodesic_shoot(const DensityMatrix& rho0, const DensityMatrix& rho1,
                              const ShootOptions& opts) {
  require(rho0.dim() == rho1.dim(), "geodesic_shoot: dimension mismatch");
  require(opts.tol > 0 && opts.starts >= 1 && opts.search_steps >= 8 &&
              opts.steps >= opts.search_steps,
          "geodesic_shoot: bad options");
  ShootContext ctx(rho0, rho1);
  const double target_angle = bures_angle(rho0, rho1);

  // Coincident endpoints: the zero geodesic.
  if (target_angle <= opts.tol) {
    const HamiltonianCurve zero =
        HamiltonianCurve::constant(HermitianMatrix::zero(ctx.n), 1.0, 2);
    return GeodesicResult{
        .xi0 = AntiHermitianMatrix::zero(ctx.n),
        .speed = 0.0,
        .duration = 1.0,
        .residual = target_angle,
        .distance_estimate = 0.0,
        .accepted = true,
        .certificate = "upper-bound-from-best-geodesic",
        .curve = VonNeumannTrajectory{zero, zero.times(), {rho0, rho0}},
    };
  }

  std::optional<StarMetric> metric;
  if (ctx.invertible) metric.emplace(rho0);
  const StarMetric* metric_ptr = metric ? &*metric : nullptr;

  const int d = static_cast<int>(ctx.basis.size());
  const auto objective = [&](const Eigen::VectorXd& c) {
    const double angle = ctx.bures_to_target(
        shoot_endpoint(ctx, metric_ptr, ctx.combine(c), opts.search_steps));
    return angle * angle;
  };

  // Start 0: the commutator heuristic [rho1, rho0] projected onto the
  // horizontal basis and rescaled to the Bures angle; remaining starts are
  // seeded random directions at comparable speeds.
  const Matrix heuristic = rho1.mat() * rho0.mat() - rho0.mat() * rho1.mat();
  Eigen::VectorXd c_heuristic(d);
  for (int a = 0; a < d; ++a)
    c_heuristic(a) = hs_forms(heuristic * ctx.psi0, ctx.basis[a] * ctx.psi0).g;
  const bool heuristic_usable = c_heuristic.norm() > 1e-10;
  if (heuristic_usable) c_heuristic *= target_angle / c_heuristic.norm();

  std::vector<Eigen::VectorXd> starts;
  starts.reserve(opts.starts);
  for (int s = 0; s < opts.starts; ++s) {
    if (s == 0 && heuristic_usable) {
      starts.push_back(c_heuristic);
      continue;
    }
    if (s == 1 && heuristic_usable) {
      starts.push_back(1.3 * c_heuristic);
      continue;
    }
    Rng rng(opts.seed + 0x9e37u * static_cast<std::uint64_t>(s + 1));
    Eigen::VectorXd c(d);
    for (int a = 0; a < d; ++a) c(a) = rng.normal();
    c *= target_angle * (0.7 + 0.6 * rng.uniform()) / c.norm();
    starts.push_back(std::move(c));
  }

  const double search_target = std::pow(0.5 * opts.tol, 2);
  const auto run_start = [&](const Eigen::VectorXd& c0) {
    const MinimizeResult m =
        minimize(objective, c0, 0.25 * target_angle, opts.max_evals, search_target);
    return StartOutcome{m.fx, m.x};
  };

  std::vector<std::future<StartOutcome>> futures;
  futures.reserve(starts.size());
  for (const Eigen::VectorXd& c0 : starts)
    futures.push_back(std::async(std::launch::async, run_start, c0));
  StartOutcome best;
  for (auto& fut : futures) {
    StartOutcome outcome = fut.get();
    if (outcome.objective < best.objective) best = std::move(outcome);
  }

  // Refine the winner on the fine grid and certify the residual there.
  const AntiHermitianMatrix xi0(antihermitize(ctx.combine(best.coeff)));
  const double residual =
      ctx.bures_to_target(shoot_endpoint(ctx, metric_ptr, xi0.mat(), opts.steps));
  require(residual <= opts.tol,
          "geodesic_shoot: no start converged (best endpoint Bures angle " +
              std::to_string(residual) + ")");

  const double speed = best.coeff.norm();
  // Sampled curve with its generator.
  auto build_curve = [&]() -> VonNeumannTrajectory {
    if (ctx.invertible) {
      const EulerArnoldFlow flow =
          euler_arnold_integrate(xi0, rho0, 1.0, opts.steps, opts.hbar);
      std::vector<DensityMatrix> rho;
      rho.reserve(flow.unitaries.size());
      for (const Matrix& u : flow.unitaries)
        rho.push_back(DensityMatrix(HermitianMatrix(u * rho0.mat() * u.adjoint())));
      return VonNeumannTrajectory{flow.hamiltonian, flow.times, std::move(rho)};
    }
    // Rank-deficient case: re-run the constrained integrator keeping nodes,
    // and synthesize the generator from the velocities.
    const int steps = opts.steps;
    const double dt = 1.0 / steps;
    std::vector<double> times(steps + 1);
    std::vector<DensityMatrix> rho;
    std::vector<HermitianMatrix> h_samples;
    rho.reserve(steps + 1);
    h_samples.reserve(steps + 1);
    Matrix psi = ctx.psi0;
    Matrix phi = xi0.mat() * ctx.psi0;
    const auto constraint_force = [&](const Matrix& p) {
      Matrix w = -2.0 * (p.adjoint() * p);
      for (int r = 0; r < ctx.k; ++r)
        for (int s = 0; s < ctx.k; ++s)
          w(r, s) /= ctx.sigma.level_of_index(r) + ctx.sigma.level_of_index(s);
      return w;
    };
    for (int j = 0; j <= steps; ++j) {
      times[j] = dt * j;
      rho.push_back(DensityMatrix(HermitianMatrix(psi * psi.adjoint())));
      h_samples.push_back(
          generator_for_velocity(Purification(psi, ctx.sigma), phi, opts.hbar));
      if (j == steps) break;
      const Matrix ka_psi = phi;
      const Matrix ka_phi = psi * constraint_force(phi);
      const Matrix psi_b = psi + 0.5 * dt * ka_psi;
      const Matrix phi_b = phi + 0.5 * dt * ka_phi;
      const Matrix kb_psi = phi_b;
      const Matrix kb_phi = psi_b * constraint_force(phi_b);
      const Matrix psi_c = psi + 0.5 * dt * kb_psi;
      const Matrix phi_c = phi + 0.5 * dt * kb_phi;
      const Matrix kc_psi = phi_c;
      const Matrix kc_phi = psi_c * constraint_force(phi_c);
      const Matrix psi_d = psi + dt * kc_psi;
      const Matrix phi_d = phi + dt * kc_phi;
      const Matrix kd_psi = phi_d;
      const Matrix kd_phi = psi_d * constraint_force(phi_d);
      psi += (dt / 6.0) * (ka_psi + 2 * kb_psi + 2 * kc_psi + kd_psi);
      phi += (dt / 6.0) * (ka_phi + 2 * kb_phi + 2 * kc_phi + kd_phi);
    }
    HamiltonianCurve h(times, std::move(h_samples));
    return VonNeumannTrajectory{std::move(h), std::move(times), std::move(rho)};
  };

  return GeodesicResult{
      .xi0 = xi0,
      .speed = speed,
      .duration = 1.0,
      .residual = residual,
      .distance_estimate = speed,
      .accepted = true,
      .certificate = "upper-bound-from-best-geodesic",
      .curve = build_curve(),
  };
}

OptimalHamiltonian optimal_hamiltonian(const DensityMatrix& rho0,
                                       const DensityMatrix& rho1,
                                       const ShootOptions& opts) {
  GeodesicResult geo = geodesic_shoot(rho0, rho1, opts);
  OptimalHamiltonian out{geo.curve.generator, std::move(geo), 0.0, 0.0};
  if (out.geodesic.distance_estimate <= opts.tol) return out;

  const HamiltonianCurve& h = out.h;
  const Purification psi0 = purify(rho0);
  const VonNeumannTrajectory rtraj = evolve_von_neumann(h, rho0, opts.hbar);
  const SchrodingerTrajectory straj = evolve_schrodinger(h, psi0, opts.hbar);
  const DispersionIntegral disp = dispersion_integral(h, rtraj);
  const double mt = opts.hbar * out.geodesic.distance_estimate / disp.delta_e;
  out.saturation_rel = std::abs(mt - h.tau()) / h.tau();
  for (std::size_t j = 0; j < straj.psi.size(); ++j) {
    const double perp = gauge_norm(
        xi_perp(xi_field(straj.psi[j], h.sample(static_cast<int>(j)), opts.hbar)));
    out.xi_perp_max = std::max(out.xi_perp_max, perp);
  }
  return out;
}

}  // namespace qsl
