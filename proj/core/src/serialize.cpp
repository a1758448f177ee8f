#include "qsl/serialize.hpp"

#include <cstdio>
#include <ostream>

namespace qsl {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), "matrix_from_json: expected array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j.at(r);
    require(static_cast<Eigen::Index>(row.size()) == cols,
            "matrix_from_json: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& e = row.at(c);
      require(e.is_array() && e.size() == 2,
              "matrix_from_json: entries must be [re, im] pairs");
      m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

Json spectrum_to_json(const Spectrum& sigma) {
  return Json{{"p", sigma.p()}, {"m", sigma.m()}};
}

Spectrum spectrum_from_json(const Json& j) {
  require(j.contains("p") && j.contains("m"),
          "spectrum_from_json: need \"p\" and \"m\" arrays");
  return Spectrum(j.at("p").get<std::vector<double>>(),
                  j.at("m").get<std::vector<int>>());
}

Json density_to_json(const DensityMatrix& rho) { return matrix_to_json(rho.mat()); }

DensityMatrix density_from_json(const Json& j) {
  return DensityMatrix(HermitianMatrix(matrix_from_json(j)));
}

Json purification_to_json(const Purification& psi) {
  return Json{{"psi", matrix_to_json(psi.mat())},
              {"spectrum", spectrum_to_json(psi.sigma())}};
}

Purification purification_from_json(const Json& j) {
  return Purification(matrix_from_json(j.at("psi")),
                      spectrum_from_json(j.at("spectrum")));
}

Json hamiltonian_to_json(const HamiltonianCurve& h) {
  Json samples = Json::array();
  for (int j = 0; j < h.nodes(); ++j)
    samples.push_back(matrix_to_json(h.sample(j).mat()));
  return Json{{"times", h.times()}, {"samples", std::move(samples)}};
}

HamiltonianCurve hamiltonian_from_json(const Json& j) {
  require(j.contains("times") && j.contains("samples"),
          "hamiltonian_from_json: need \"times\" and \"samples\"");
  const auto times = j.at("times").get<std::vector<double>>();
  std::vector<HermitianMatrix> samples;
  samples.reserve(j.at("samples").size());
  for (const Json& s : j.at("samples"))
    samples.push_back(HermitianMatrix(matrix_from_json(s)));
  return HamiltonianCurve(times, std::move(samples));
}

Json report_to_json(const BoundsReport& rep) {
  return Json{
      {"tau", rep.tau},
      {"hbar", rep.hbar},
      {"distance", rep.distance},
      {"distance_residual", rep.distance_residual},
      {"distance_method", rep.distance_method},
      {"bures", rep.bures},
      {"delta_e", rep.delta_e},
      {"ebar", rep.ebar},
      {"mean_shifted", rep.mean_shifted},
      {"commuting", rep.commuting},
      {"distinguishable", rep.distinguishable},
      {"bounds",
       {{"mt_geometric", rep.mt_geometric},
        {"mt_bures", rep.mt_bures},
        {"ml", rep.ml},
        {"dl", rep.dl},
        {"dl_improved", rep.dl_improved}}},
      {"applicable",
       {{"mt", rep.mt_applicable},
        {"ml", rep.ml_applicable},
        {"dl", rep.dl_applicable},
        {"dl_improved", rep.dl_improved_applicable}}},
      {"saturated", {{"mt", rep.mt_saturated}, {"ml", rep.ml_saturated}}},
  };
}

std::string report_csv_header() {
  return "tau,hbar,distance,distance_residual,distance_method,bures,delta_e,"
         "ebar,mean_shifted,commuting,distinguishable,mt_geometric,mt_bures,"
         "ml,dl,dl_improved,mt_applicable,ml_applicable,dl_applicable,"
         "dl_improved_applicable,mt_saturated,ml_saturated";
}

std::string report_csv_row(const BoundsReport& rep) {
  std::string row;
  const auto add = [&row](const std::string& field) {
    if (!row.empty()) row += ',';
    row += field;
  };
  add(format_double(rep.tau));
  add(format_double(rep.hbar));
  add(format_double(rep.distance));
  add(format_double(rep.distance_residual));
  add(rep.distance_method);
  add(format_double(rep.bures));
  add(format_double(rep.delta_e));
  add(format_double(rep.ebar));
  add(format_double(rep.mean_shifted));
  add(rep.commuting ? "1" : "0");
  add(rep.distinguishable ? "1" : "0");
  add(format_double(rep.mt_geometric));
  add(format_double(rep.mt_bures));
  add(format_double(rep.ml));
  add(format_double(rep.dl));
  add(format_double(rep.dl_improved));
  add(rep.mt_applicable ? "1" : "0");
  add(rep.ml_applicable ? "1" : "0");
  add(rep.dl_applicable ? "1" : "0");
  add(rep.dl_improved_applicable ? "1" : "0");
  add(rep.mt_saturated ? "1" : "0");
  add(rep.ml_saturated ? "1" : "0");
  return row;
}

Json geodesic_to_json(const GeodesicResult& result, const std::string& curve_csv) {
  Json curve{{"nodes", static_cast<int>(result.curve.times.size())}};
  if (curve_csv.empty())
    curve["csv"] = nullptr;
  else
    curve["csv"] = curve_csv;
  return Json{
      {"xi0", matrix_to_json(result.xi0.mat())},
      {"speed", result.speed},
      {"duration", result.duration},
      {"residual", result.residual},
      {"distance_estimate", result.distance_estimate},
      {"accepted", result.accepted},
      {"certificate", result.certificate},
      {"curve", std::move(curve)},
  };
}

void write_trajectory_csv(std::ostream& os, const VonNeumannTrajectory& traj) {
  const Eigen::Index n = traj.rho.front().dim();
  os << "t";
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      os << ",rho_" << i << "_" << j << "_re,rho_" << i << "_" << j << "_im";
  os << ",dH\n";
  for (std::size_t node = 0; node < traj.times.size(); ++node) {
    const Matrix& rho = traj.rho[node].mat();
    const Matrix& hm = traj.generator.sample(static_cast<int>(node)).mat();
    const double mean = (hm * rho).trace().real();
    const double mean2 = (hm * hm * rho).trace().real();
    const double dh = std::sqrt(std::max(0.0, mean2 - mean * mean));
    os << format_double(traj.times[node]);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        os << ',' << format_double(rho(i, j).real()) << ','
           << format_double(rho(i, j).imag());
    os << ',' << format_double(dh) << '\n';
  }
}

}  // namespace qsl
