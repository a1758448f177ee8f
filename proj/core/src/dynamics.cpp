#include "qsl/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace qsl {

namespace {

// Propagator over one step: exp(-i H_mid dt / hbar).
Matrix step_unitary(const Matrix& h_mid, double dt, double hbar) {
  return exp_antiherm(AntiHermitianMatrix(h_mid * Complex(0, -dt / hbar)));
}

void check_grids_match(const std::vector<double>& a, const std::vector<double>& b,
                       const char* what) {
  require(a.size() == b.size(), std::string(what) + ": grid size mismatch");
  for (std::size_t j = 0; j < a.size(); ++j)
    require(std::abs(a[j] - b[j]) <= 1e-12 * std::max(1.0, a.back()),
            std::string(what) + ": grids differ");
}

double trapezoid(const std::vector<double>& f, double dt) {
  double sum = 0.5 * (f.front() + f.back());
  for (std::size_t j = 1; j + 1 < f.size(); ++j) sum += f[j];
  return sum * dt;
}

Matrix scale_columns_by_inverse_levels(const Matrix& a, const Spectrum& sigma) {
  Matrix out = a;
  for (Eigen::Index b = 0; b < out.cols(); ++b)
    out.col(b) /= sigma.level_of_index(static_cast<int>(b));
  return out;
}

// Moore-Penrose inverse of a purification: P(sigma)^{-1} psi^dag.
Matrix purification_pinv(const Purification& psi) {
  Matrix pinv = psi.mat().adjoint();
  for (Eigen::Index i = 0; i < pinv.rows(); ++i)
    pinv.row(i) /= psi.sigma().level_of_index(static_cast<int>(i));
  return pinv;
}

}  // namespace

HamiltonianCurve::HamiltonianCurve(std::vector<double> times,
                                   std::vector<HermitianMatrix> samples)
    : times_(std::move(times)), samples_(std::move(samples)) {
  require(times_.size() >= 2, "HamiltonianCurve: need at least 2 grid nodes");
  require(times_.size() == samples_.size(),
          "HamiltonianCurve: one sample per grid node required");
  require(std::abs(times_.front()) <= 1e-15, "HamiltonianCurve: grid must start at 0");
  require(times_.back() > 0, "HamiltonianCurve: tau must be positive");
  const double step = times_[1] - times_[0];
  require(step > 0, "HamiltonianCurve: grid must be increasing");
  for (std::size_t j = 1; j < times_.size(); ++j) {
    require(std::abs((times_[j] - times_[j - 1]) - step) <= 1e-9 * times_.back(),
            "HamiltonianCurve: grid must be uniform");
    require(samples_[j].dim() == samples_[0].dim(),
            "HamiltonianCurve: sample dimensions must agree");
  }
}

HamiltonianCurve HamiltonianCurve::constant(const HermitianMatrix& h, double tau,
                                            int nodes) {
  require(nodes >= 2, "HamiltonianCurve::constant: need at least 2 nodes");
  std::vector<double> times(nodes);
  for (int j = 0; j < nodes; ++j) times[j] = tau * j / (nodes - 1);
  return HamiltonianCurve(std::move(times),
                          std::vector<HermitianMatrix>(nodes, h));
}

Matrix HamiltonianCurve::at(double t) const {
  require(t >= -1e-12 && t <= tau() * (1 + 1e-12),
          "HamiltonianCurve::at: time outside [0, tau]");
  const double step = dt();
  const int last = nodes() - 1;
  const int j = std::clamp(static_cast<int>(std::floor(t / step)), 0, last - 1);
  const double w = std::clamp((t - times_[j]) / step, 0.0, 1.0);
  return (1.0 - w) * samples_[j].mat() + w * samples_[j + 1].mat();
}

Matrix HamiltonianCurve::midpoint(int j) const {
  require(j >= 0 && j + 1 < nodes(), "HamiltonianCurve::midpoint: step out of range");
  return 0.5 * (samples_[j].mat() + samples_[j + 1].mat());
}

HamiltonianCurve HamiltonianCurve::resampled(int new_nodes) const {
  require(new_nodes >= 2, "HamiltonianCurve::resampled: need at least 2 nodes");
  std::vector<double> t(new_nodes);
  std::vector<HermitianMatrix> s;
  s.reserve(new_nodes);
  for (int j = 0; j < new_nodes; ++j) {
    t[j] = tau() * j / (new_nodes - 1);
    s.push_back(HermitianMatrix(at(t[j])));
  }
  return HamiltonianCurve(std::move(t), std::move(s));
}

SchrodingerTrajectory evolve_schrodinger(const HamiltonianCurve& h,
                                         const Purification& psi0, double hbar) {
  require(h.dim() == psi0.ambient_dim(), "evolve_schrodinger: dimension mismatch");
  require(hbar > 0, "evolve_schrodinger: hbar must be positive");
  SchrodingerTrajectory traj{h, h.times(), {}};
  traj.psi.reserve(h.nodes());
  traj.psi.push_back(psi0);
  Matrix psi = psi0.mat();
  for (int j = 0; j + 1 < h.nodes(); ++j) {
    psi = step_unitary(h.midpoint(j), h.dt(), hbar) * psi;
    traj.psi.emplace_back(psi, psi0.sigma());
  }
  return traj;
}

VonNeumannTrajectory evolve_von_neumann(const HamiltonianCurve& h,
                                        const DensityMatrix& rho0, double hbar) {
  require(h.dim() == rho0.dim(), "evolve_von_neumann: dimension mismatch");
  require(hbar > 0, "evolve_von_neumann: hbar must be positive");
  VonNeumannTrajectory traj{h, h.times(), {}};
  traj.rho.reserve(h.nodes());
  traj.rho.push_back(rho0);
  Matrix rho = rho0.mat();
  for (int j = 0; j + 1 < h.nodes(); ++j) {
    const Matrix u = step_unitary(h.midpoint(j), h.dt(), hbar);
    rho = u * rho * u.adjoint();
    traj.rho.push_back(DensityMatrix(HermitianMatrix(rho)));
  }
  return traj;
}

SchrodingerTrajectory horizontal_lift(const HamiltonianCurve& h,
                                      const Purification& psi0, double hbar) {
  require(h.dim() == psi0.ambient_dim(), "horizontal_lift: dimension mismatch");
  const Spectrum& sigma = psi0.sigma();
  const double dt = h.dt();

  // Share the unitary steps of the plain Schrodinger solution, so the gauge
  // shift cannot move the projection.
  const SchrodingerTrajectory base = evolve_schrodinger(h, psi0, hbar);
  std::vector<Matrix> a_nodes(base.psi.size());
  for (std::size_t j = 0; j < base.psi.size(); ++j)
    a_nodes[j] = connection(base.psi[j],
                            h.sample(static_cast<int>(j)).mat() *
                                base.psi[j].mat() / Complex(0, hbar))
                     .mat();

  SchrodingerTrajectory traj{h, h.times(), {}};
  traj.psi.reserve(base.psi.size());
  traj.psi.push_back(psi0);
  Matrix gauge = Matrix::Identity(sigma.rank(), sigma.rank());
  for (std::size_t j = 0; j + 1 < base.psi.size(); ++j) {
    const Matrix a_mid = 0.5 * (a_nodes[j] + a_nodes[j + 1]);
    gauge = exp_antiherm(AntiHermitianMatrix(-dt * a_mid)) * gauge;
    traj.psi.emplace_back(base.psi[j + 1].mat() * gauge, sigma);
  }
  return traj;
}

HamiltonianCurve parallel_hamiltonian(const HamiltonianCurve& h,
                                      const SchrodingerTrajectory& traj,
                                      double hbar) {
  check_grids_match(h.times(), traj.times, "parallel_hamiltonian");
  std::vector<HermitianMatrix> samples;
  samples.reserve(h.nodes());
  for (int j = 0; j < h.nodes(); ++j) {
    const Purification& psi = traj.psi[j];
    const GaugeAlgebraElement xi = xi_field(psi, h.sample(j), hbar);
    const Matrix correction =
        Complex(0, -hbar) * psi.mat() *
        scale_columns_by_inverse_levels(xi.mat(), psi.sigma()) *
        psi.mat().adjoint();
    samples.push_back(HermitianMatrix(h.sample(j).mat() + correction));
  }
  return HamiltonianCurve(h.times(), std::move(samples));
}

HermitianMatrix generator_for_velocity(const Purification& psi,
                                       const Matrix& psi_dot, double hbar) {
  require(psi_dot.rows() == psi.ambient_dim() && psi_dot.cols() == psi.rank(),
          "generator_for_velocity: shape mismatch");
  const Matrix pinv = purification_pinv(psi);
  const Matrix t = psi_dot * pinv;
  // Tangency makes psi^dag psi_dot anti-Hermitian; enforce against round-off.
  const Matrix s = antihermitize(psi.mat().adjoint() * psi_dot);
  const Matrix h = Complex(0, hbar) *
                   (t - t.adjoint() - pinv.adjoint() * s * pinv);
  return HermitianMatrix(h);
}

DispersionIntegral dispersion_integral(const HamiltonianCurve& h,
                                       const VonNeumannTrajectory& traj) {
  check_grids_match(h.times(), traj.times, "dispersion_integral");
  std::vector<double> f(traj.times.size());
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    const Matrix& hm = h.sample(static_cast<int>(j)).mat();
    const Matrix& rho = traj.rho[j].mat();
    const double mean = (hm * rho).trace().real();
    const double mean2 = (hm * hm * rho).trace().real();
    f[j] = std::sqrt(std::max(0.0, mean2 - mean * mean));
  }
  const double integral = trapezoid(f, h.dt());
  return DispersionIntegral{integral, integral / h.tau()};
}

double curve_length(const VonNeumannTrajectory& traj, const Purification& psi0,
                    double hbar) {
  const HamiltonianCurve& h = traj.generator;
  const SchrodingerTrajectory lift = evolve_schrodinger(h, psi0, hbar);
  std::vector<double> f(lift.times.size());
  for (std::size_t j = 0; j < lift.times.size(); ++j) {
    const Matrix x =
        h.sample(static_cast<int>(j)).mat() * lift.psi[j].mat() / Complex(0, hbar);
    const Split parts = split(lift.psi[j], x);
    f[j] = std::sqrt(std::max(0.0, hs_forms(parts.horizontal, parts.horizontal).g));
  }
  return trapezoid(f, h.dt());
}

namespace {

// Common eigenframe of a commuting family: diagonalize a generic random
// combination, then refine inside any degenerate cluster with a second
// combination. Jointly degenerate subspaces keep an arbitrary frame.
Matrix common_frame(const HamiltonianCurve& h) {
  Rng rng(0x636f6d6d757465ULL);
  const Eigen::Index n = h.dim();
  Matrix m1 = Matrix::Zero(n, n);
  Matrix m2 = Matrix::Zero(n, n);
  for (int j = 0; j < h.nodes(); ++j) {
    m1 += (0.5 + rng.uniform()) * h.sample(j).mat();
    m2 += (0.5 + rng.uniform()) * h.sample(j).mat();
  }
  const EigHerm first = eig_herm(HermitianMatrix(m1));
  Matrix frame = first.vectors;
  const double scale = std::max(1.0, m1.norm());
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n &&
           first.values(stop - 1) - first.values(stop) <= kDegeneracyTol * scale)
      ++stop;
    if (stop - start > 1) {
      const Matrix w = frame.middleCols(start, stop - start);
      const EigHerm sub = eig_herm(HermitianMatrix(w.adjoint() * m2 * w));
      frame.middleCols(start, stop - start) = w * sub.vectors;
    }
    start = stop;
  }
  return frame;
}

double offdiagonal_residual(const Matrix& c) {
  Matrix off = c;
  off.diagonal().setZero();
  return off.norm();
}

}  // namespace

bool commuting_family(const HamiltonianCurve& h, double tol) {
  const Matrix frame = common_frame(h);
  for (int j = 0; j < h.nodes(); ++j) {
    const Matrix c = frame.adjoint() * h.sample(j).mat() * frame;
    if (offdiagonal_residual(c) > tol * std::max(1.0, h.sample(j).mat().norm()))
      return false;
  }
  return true;
}

AveragedHamiltonian averaged_hamiltonian(const HamiltonianCurve& h) {
  const Matrix frame = common_frame(h);
  const Eigen::Index n = h.dim();
  Eigen::MatrixXd curves(h.nodes(), n);
  for (int j = 0; j < h.nodes(); ++j) {
    const Matrix c = frame.adjoint() * h.sample(j).mat() * frame;
    require(offdiagonal_residual(c) <= 1e-8 * std::max(1.0, h.sample(j).mat().norm()),
            "averaged_hamiltonian: Hamiltonian family does not commute");
    for (Eigen::Index i = 0; i < n; ++i) curves(j, i) = c(i, i).real();
  }

  Eigen::VectorXd ebar(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<double> shifted(h.nodes());
    for (int j = 0; j < h.nodes(); ++j)
      shifted[j] = curves(j, i) - curves.row(j).minCoeff();
    ebar(i) = trapezoid(shifted, h.dt()) / h.tau();
  }

  const Matrix hbar_tau =
      frame * ebar.cast<Complex>().asDiagonal() * frame.adjoint();
  return AveragedHamiltonian{frame, std::move(curves), std::move(ebar),
                             HermitianMatrix(hbar_tau)};
}

double AveragedHamiltonian::mean(const DensityMatrix& rho) const {
  return (hbar_tau.mat() * rho.mat()).trace().real();
}

double mean_shifted_energy(const VonNeumannTrajectory& traj) {
  const HamiltonianCurve& h = traj.generator;
  std::vector<double> f(traj.times.size());
  for (std::size_t j = 0; j < traj.times.size(); ++j) {
    const HermitianMatrix& hm = h.sample(static_cast<int>(j));
    const double mean = (hm.mat() * traj.rho[j].mat()).trace().real();
    const double ground = eig_herm(hm).values.minCoeff();
    f[j] = mean - ground;
  }
  return trapezoid(f, h.dt()) / h.tau();
}

}  // namespace qsl
