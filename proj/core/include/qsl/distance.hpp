#pragma once

// Endpoint-distance dispatch shared by the report pipeline: exact closed
// forms where they exist, geodesic shooting otherwise.

#include "qsl/bounds.hpp"
#include "qsl/geodesy.hpp"

namespace qsl {

/// Exact geodesic distance between invertible isospectral qubit states:
/// with rho1 expressed in the eigenbasis of rho0, the geodesic parameter
/// satisfies cos^2(a t) = ((rho1)_11 - p2) / (p1 - p2).
double qubit_distance_closed_form(const DensityMatrix& rho0,
                                  const DensityMatrix& rho1);

/// Distance with certification method:
///   "coincident"  endpoints equal within tolerance -> 0
///   "prop2"       fully distinguishable -> pi/2 exactly
///   "closed-form" invertible qubit pair
///   "shooting"    multi-start geodesic shooting (upper bound)
DistanceInfo compute_distance(const DensityMatrix& rho0, const DensityMatrix& rho1,
                              const ShootOptions& opts = {});

}  // namespace qsl
