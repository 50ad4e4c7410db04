#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphpde/graph.hpp"
#include "graphpde/heat.hpp"
#include "graphpde/laplacian.hpp"
#include "graphpde/metric.hpp"
#include "graphpde/spectral.hpp"
#include "graphpde/wave.hpp"

namespace graphpde {

// All numeric output funnels through format_double (shortest round-trip
// decimal), so identical inputs give byte-identical files.

inline void write_matrix_csv(std::ostream& os, const WeightedGraph& g,
                             const Eigen::MatrixXd& m,
                             std::span<const int> vertices) {
  os << "vertex";
  for (int v : vertices) os << ',' << g.id_of(v);
  os << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << g.id_of(vertices[static_cast<size_t>(i)]);
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << ',' << format_double(m(i, j));
    os << '\n';
  }
}

inline void write_operator_csv(std::ostream& os, const WeightedGraph& g,
                               const OperatorMatrix& m) {
  write_matrix_csv(os, g, m.entries, m.vertices);
}

inline void write_spectrum_csv(std::ostream& os, const WeightedGraph& g,
                               const Spectrum& s, std::span<const int> vertices) {
  os << "lambda";
  for (int v : vertices) os << ',' << g.id_of(v);
  os << '\n';
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    os << format_double(s.eigenvalues[i]);
    for (Eigen::Index r = 0; r < s.eigenvectors.rows(); ++r)
      os << ',' << format_double(s.eigenvectors(r, i));
    os << '\n';
  }
}

inline void write_signal_csv(std::ostream& os, const WeightedGraph& g,
                             const VertexSignal& f) {
  os << "vertex,value\n";
  for (size_t i = 0; i < f.domain.size(); ++i)
    os << g.id_of(f.domain[i]) << ',' << format_double(f.values[static_cast<Eigen::Index>(i)])
       << '\n';
}

inline void write_time_series_csv(std::ostream& os, const WeightedGraph& g,
                                  std::span<const double> times,
                                  std::span<const VertexSignal> rows) {
  os << "t";
  if (!rows.empty())
    for (int v : rows.front().domain) os << ',' << g.id_of(v);
  os << '\n';
  for (size_t k = 0; k < rows.size(); ++k) {
    os << format_double(times[k]);
    for (Eigen::Index j = 0; j < rows[k].values.size(); ++j)
      os << ',' << format_double(rows[k].values[j]);
    os << '\n';
  }
}

inline void write_wave_series_csv(std::ostream& os, const WeightedGraph& g,
                                  std::span<const WaveState> states,
                                  std::span<const double> energies) {
  os << "t,vertex,u,u_t,energy\n";
  for (size_t k = 0; k < states.size(); ++k) {
    const auto& st = states[k];
    for (size_t i = 0; i < st.position.domain.size(); ++i) {
      os << format_double(st.time) << ',' << g.id_of(st.position.domain[i]) << ','
         << format_double(st.position.values[static_cast<Eigen::Index>(i)]) << ','
         << format_double(st.velocity.values[static_cast<Eigen::Index>(i)]) << ','
         << format_double(energies[k]) << '\n';
    }
  }
}

inline void write_metric_csv(std::ostream& os, const MetricSpectrum& s,
                             bool include_excluded = false) {
  os << "omega,lambda,multiplicity,certified_residual,window\n";
  auto row = [&](const MetricEntry& e) {
    os << format_double(e.omega) << ',' << format_double(e.lambda()) << ','
       << e.multiplicity << ',' << format_double(e.certified_residual) << ','
       << e.window << '\n';
  };
  for (const auto& e : s.frequencies) row(e);
  if (include_excluded)
    for (const auto& e : s.excluded) row(e);
}

// --- JSON output -----------------------------------------------------------

inline nlohmann::json signal_to_json(const WeightedGraph& g, const VertexSignal& f) {
  nlohmann::json out = nlohmann::json::object();
  for (size_t i = 0; i < f.domain.size(); ++i)
    out[g.id_of(f.domain[i])] = f.values[static_cast<Eigen::Index>(i)];
  return out;
}

inline nlohmann::json spectrum_to_json(const WeightedGraph& g, const Spectrum& s,
                                       std::span<const int> vertices) {
  nlohmann::json out;
  out["eigenvalues"] = std::vector<double>(
      s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size());
  std::vector<std::string> ids;
  for (int v : vertices) ids.push_back(g.id_of(v));
  out["vertices"] = ids;
  nlohmann::json vecs = nlohmann::json::array();
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    std::vector<double> col(s.eigenvectors.rows());
    for (Eigen::Index r = 0; r < s.eigenvectors.rows(); ++r)
      col[static_cast<size_t>(r)] = s.eigenvectors(r, i);
    vecs.push_back(col);
  }
  out["eigenvectors"] = std::move(vecs);
  return out;
}

inline nlohmann::json metric_to_json(const MetricSpectrum& s) {
  auto entry = [](const MetricEntry& e) {
    nlohmann::json j;
    j["omega"] = e.omega;
    j["lambda"] = e.lambda();
    j["multiplicity"] = e.multiplicity;
    j["window"] = e.window;
    if (!std::isnan(e.certified_residual))
      j["certified_residual"] = e.certified_residual;
    return j;
  };
  nlohmann::json out;
  out["source"] = s.source == MetricSpectrum::Source::ClosedFormUnit
                      ? "closed-form-unit"
                      : "secular-scan";
  out["frequencies"] = nlohmann::json::array();
  for (const auto& e : s.frequencies) out["frequencies"].push_back(entry(e));
  out["excluded"] = nlohmann::json::array();
  for (const auto& e : s.excluded) out["excluded"].push_back(entry(e));
  out["diagnostics"] = s.diagnostics;
  return out;
}

// --- Signal files ----------------------------------------------------------

/// Initial data file: a JSON map vertex id → value.
inline std::map<std::string, double> parse_signal_map(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error("malformed_json", e.what());
  }
  if (!doc.is_object())
    throw Error("malformed_json", "expected a JSON object of vertex: value pairs");
  std::map<std::string, double> out;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it.value().is_number())
      throw Error("malformed_json", "value for '" + it.key() + "' is not a number");
    out[it.key()] = it.value().get<double>();
  }
  return out;
}

/// Boundary signal file:
///   {"grid": {"t0": 0, "t1": T, "samples": m}, "values": {"id": [s0...s_{m-1}]}}
/// All boundary vertices must appear and every sample list must have length m.
inline BoundarySignal parse_boundary_signal(const WeightedGraph& g,
                                            const BoundaryPartition& part,
                                            const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error("malformed_json", e.what());
  }
  if (!doc.is_object() || !doc.contains("grid") || !doc.contains("values"))
    throw Error("malformed_json", "expected {grid: {...}, values: {...}}");
  const auto& grid = doc["grid"];
  if (!grid.contains("t0") || !grid.contains("t1") || !grid.contains("samples"))
    throw Error("malformed_json", "grid needs t0, t1 and samples");
  const double t0 = grid["t0"].get<double>();
  const double t1 = grid["t1"].get<double>();
  const int samples = grid["samples"].get<int>();
  if (t0 != 0.0) throw Error("bad_grid", "boundary grids start at t0 = 0");
  if (samples < 1) throw Error("bad_grid", "need at least one sample");
  if (samples > 1 && !(t1 > t0)) throw Error("bad_grid", "t1 must exceed t0");

  Eigen::MatrixXd values(samples, static_cast<Eigen::Index>(part.boundary.size()));
  const auto& vals = doc["values"];
  for (size_t i = 0; i < part.boundary.size(); ++i) {
    const std::string& id = g.id_of(part.boundary[i]);
    if (!vals.contains(id))
      throw Error("signal_domain", "no samples for boundary vertex '" + id + "'");
    const auto& arr = vals[id];
    if (!arr.is_array() || static_cast<int>(arr.size()) != samples)
      throw Error("signal_domain", "vertex '" + id + "' needs exactly " +
                                       std::to_string(samples) + " samples");
    for (int k = 0; k < samples; ++k)
      values(k, static_cast<Eigen::Index>(i)) = arr[static_cast<size_t>(k)].get<double>();
  }
  for (auto it = vals.begin(); it != vals.end(); ++it) {
    int v = g.index_of(it.key());
    if (!std::binary_search(part.boundary.begin(), part.boundary.end(), v))
      throw Error("signal_domain",
                  "vertex '" + it.key() + "' is not a boundary vertex");
  }
  const double dt = samples > 1 ? (t1 - t0) / (samples - 1) : 0.0;
  return BoundarySignal::sampled(part, dt, std::move(values));
}

}  // namespace graphpde
