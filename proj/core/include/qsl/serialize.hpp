#pragma once

// JSON and CSV interchange. Matrices serialize as nested arrays of [re, im]
// pairs (row major); spectra as {"p": [...], "m": [...]}; Hamiltonian curves
// add a "times" array. CSV uses 17-significant-digit decimal floats so
// values round-trip exactly.

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "qsl/bounds.hpp"
#include "qsl/geodesy.hpp"

namespace qsl {

using Json = nlohmann::ordered_json;

std::string format_double(double v);  // shortest 17-significant-digit form

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json spectrum_to_json(const Spectrum& sigma);
Spectrum spectrum_from_json(const Json& j);

Json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const Json& j);

Json purification_to_json(const Purification& psi);
Purification purification_from_json(const Json& j);

Json hamiltonian_to_json(const HamiltonianCurve& h);
HamiltonianCurve hamiltonian_from_json(const Json& j);

Json report_to_json(const BoundsReport& rep);
std::string report_csv_header();
std::string report_csv_row(const BoundsReport& rep);

/// GeodesicResult with xi0, residual and a reference to the sampled curve
/// (node count plus the CSV path when one was written).
Json geodesic_to_json(const GeodesicResult& result,
                      const std::string& curve_csv = "");

/// Trajectory CSV: t, vec(rho) row-major with re/im interleaved, Delta H(t).
void write_trajectory_csv(std::ostream& os, const VonNeumannTrajectory& traj);

}  // namespace qsl
