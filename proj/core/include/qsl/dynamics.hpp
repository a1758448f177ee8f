#pragma once

// Schrodinger / von Neumann propagation on S(sigma) and D(sigma), horizontal
// lifting by gauge shift, parallel-Hamiltonian synthesis, dispersion
// integrals, curve lengths, and the time-averaged Hamiltonian entering the
// Margolus-Levitin bounds.

#include <functional>
#include <vector>

#include "qsl/bundle.hpp"

namespace qsl {

/// Time-dependent Hermitian matrix sampled on a uniform grid over [0, tau].
/// Values between nodes are linear interpolants of the samples.
class HamiltonianCurve {
 public:
  HamiltonianCurve(std::vector<double> times, std::vector<HermitianMatrix> samples);

  static HamiltonianCurve constant(const HermitianMatrix& h, double tau, int nodes);

  double tau() const { return times_.back(); }
  double dt() const { return times_[1] - times_[0]; }
  int nodes() const { return static_cast<int>(times_.size()); }
  Eigen::Index dim() const { return samples_[0].dim(); }
  const std::vector<double>& times() const { return times_; }
  const HermitianMatrix& sample(int j) const { return samples_[j]; }

  /// Linear interpolation at an arbitrary time in [0, tau].
  Matrix at(double t) const;
  /// Midpoint of step j: (H(t_j) + H(t_{j+1})) / 2.
  Matrix midpoint(int j) const;

  /// Same curve resampled on a uniform grid with the given node count.
  /// Only Hamiltonian samples are ever interpolated, never states.
  HamiltonianCurve resampled(int nodes) const;

 private:
  std::vector<double> times_;
  std::vector<HermitianMatrix> samples_;
};

struct SchrodingerTrajectory {
  HamiltonianCurve generator;
  std::vector<double> times;
  std::vector<Purification> psi;
};

struct VonNeumannTrajectory {
  HamiltonianCurve generator;
  std::vector<double> times;
  std::vector<DensityMatrix> rho;
};

/// Unitary midpoint stepping psi_{j+1} = exp(-i H(t_{j+1/2}) dt / hbar) psi_j.
/// The steps are exactly unitary, so the S(sigma) constraint is preserved
/// structurally rather than by projection.
SchrodingerTrajectory evolve_schrodinger(const HamiltonianCurve& h,
                                         const Purification& psi0,
                                         double hbar = 1.0);

/// Conjugation of rho0 by the same unitary steps; the spectrum is preserved
/// exactly per step.
VonNeumannTrajectory evolve_von_neumann(const HamiltonianCurve& h,
                                        const DensityMatrix& rho0,
                                        double hbar = 1.0);

/// Gauge shift of the Schrodinger solution into a horizontal curve:
/// psi_par(t) = psi(t) exp_+(-int_0^t A_psi(psi_dot) dt), with psi_dot taken
/// from the generator at midpoints.
SchrodingerTrajectory horizontal_lift(const HamiltonianCurve& h,
                                      const Purification& psi0,
                                      double hbar = 1.0);

/// Parallel Hamiltonian along a lifted trajectory:
/// H_par(t) = H(t) - i hbar psi(t) xi_H(t) P(sigma)^{-1} psi(t)^dag.
/// The correction is Hermitian, vanishes on the orthocomplement of the image
/// of psi(t), and removes the full vertical generator: xi_{H_par} = 0 and
/// [H_par, rho] = [H, rho].
HamiltonianCurve parallel_hamiltonian(const HamiltonianCurve& h,
                                      const SchrodingerTrajectory& traj,
                                      double hbar = 1.0);

/// Hermitian H with H psi = i hbar psi_dot for a tangent velocity psi_dot,
/// acting as zero on the orthocomplement of the image of psi.
HermitianMatrix generator_for_velocity(const Purification& psi,
                                       const Matrix& psi_dot, double hbar = 1.0);

struct DispersionIntegral {
  double integral;  // int_0^tau Delta H(rho(t)) dt
  double delta_e;   // integral / tau
};

/// Trapezoid quadrature of the energy uncertainty along the trajectory.
/// The Hamiltonian grid must coincide with the trajectory grid.
DispersionIntegral dispersion_integral(const HamiltonianCurve& h,
                                       const VonNeumannTrajectory& traj);

/// Length of the projected curve, computed as the integral of the norm of the
/// horizontal part of psi_dot along the Schrodinger lift through psi0.
double curve_length(const VonNeumannTrajectory& traj, const Purification& psi0,
                    double hbar = 1.0);

/// True iff all samples are simultaneously diagonalizable within the given
/// relative tolerance.
bool commuting_family(const HamiltonianCurve& h, double tol = 1e-8);

/// Time-averaged Hamiltonian of a commuting family: a common eigenframe V,
/// per-level energy curves E_n(t), ground-shifted averages
/// Ebar_n(tau) = (1/tau) int (E_n - E_0) dt, and Hbar(tau) in that frame.
struct AveragedHamiltonian {
  Matrix frame;                  // common eigenframe V
  Eigen::MatrixXd energy_curves; // nodes x n, E_n at each grid node
  Eigen::VectorXd ebar_levels;   // Ebar_n(tau)
  HermitianMatrix hbar_tau;      // sum_n Ebar_n(tau) |n><n|

  /// Ebar functional: Tr(Hbar(tau) rho).
  double mean(const DensityMatrix& rho) const;
};

/// Throws if the family does not commute; the underlying theorems require it.
AveragedHamiltonian averaged_hamiltonian(const HamiltonianCurve& h);

/// (1/tau) int (Tr(H rho) - E_0(t)) dt along the trajectory, with E_0 the
/// instantaneous ground energy of the generator.
double mean_shifted_energy(const VonNeumannTrajectory& traj);

}  // namespace qsl
