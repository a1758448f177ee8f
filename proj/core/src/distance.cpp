#include "qsl/distance.hpp"

#include <cmath>
#include <numbers>

namespace qsl {

double qubit_distance_closed_form(const DensityMatrix& rho0,
                                  const DensityMatrix& rho1) {
  require(rho0.dim() == 2 && rho1.dim() == 2,
          "qubit_distance_closed_form: qubit states required");
  const Spectrum sigma = spectrum_of(rho0);
  require(sigma.same_as(spectrum_of(rho1)),
          "qubit_distance_closed_form: states are not isospectral");
  require(sigma.rank() == 2 && sigma.levels() == 2,
          "qubit_distance_closed_form: need an invertible non-degenerate qubit");
  const double p1 = sigma.p()[0];
  const double p2 = sigma.p()[1];
  const EigHerm ed = eig_herm(rho0.herm());
  const Matrix rot = ed.vectors.adjoint() * rho1.mat() * ed.vectors;
  const double ratio = std::clamp((rot(0, 0).real() - p2) / (p1 - p2), 0.0, 1.0);
  return std::acos(std::sqrt(ratio));
}

DistanceInfo compute_distance(const DensityMatrix& rho0, const DensityMatrix& rho1,
                              const ShootOptions& opts) {
  const double angle = bures_angle(rho0, rho1);
  if (angle <= opts.tol) return DistanceInfo{0.0, angle, "coincident"};
  if (fully_distinguishable(rho0, rho1))
    return DistanceInfo{std::numbers::pi / 2.0, 0.0, "prop2"};
  const Spectrum sigma = spectrum_of(rho0);
  if (rho0.dim() == 2 && sigma.rank() == 2 && sigma.levels() == 2 &&
      sigma.same_as(spectrum_of(rho1)))
    return DistanceInfo{qubit_distance_closed_form(rho0, rho1), 0.0, "closed-form"};
  const GeodesicResult shot = geodesic_shoot(rho0, rho1, opts);
  return DistanceInfo{shot.distance_estimate, shot.residual, "shooting"};
}

}  // namespace qsl
