#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "graphpde/error.hpp"
#include "graphpde/format.hpp"

namespace graphpde {

struct Edge {
  int u = -1;  ///< endpoint index, as declared
  int v = -1;
  double weight = 1.0;
  double length = 1.0;
};

struct Neighbor {
  int vertex;
  double weight;
  double length;
};

/// Undirected finite graph with positive edge weights and optional edge
/// lengths (default 1). Vertices are string ids; matrix rows/columns are
/// assigned from declaration order so every numeric index is traceable to a
/// vertex id. Immutable after construction.
class WeightedGraph {
public:
  struct EdgeSpec {
    std::string u, v;
    double weight = 1.0;
    double length = 1.0;
    std::string where;  ///< provenance for error messages ("line 3", "edges[1]")
  };

  /// Validating constructor. When `ids` is empty the vertex order is the
  /// order of first appearance in `specs`.
  static WeightedGraph build(std::vector<std::string> ids,
                             const std::vector<EdgeSpec>& specs) {
    WeightedGraph g;
    const bool declared = !ids.empty();
    if (declared) {
      for (const auto& id : ids) {
        if (g.index_.count(id))
          throw Error("duplicate_vertex", "duplicate vertex id '" + id + "'");
        g.index_.emplace(id, static_cast<int>(g.ids_.size()));
        g.ids_.push_back(id);
      }
    }
    auto lookup = [&](const std::string& id, const std::string& where) -> int {
      auto it = g.index_.find(id);
      if (it != g.index_.end()) return it->second;
      if (declared)
        throw Error("unknown_vertex",
                    where + ": vertex '" + id + "' not in vertex list");
      int idx = static_cast<int>(g.ids_.size());
      g.index_.emplace(id, idx);
      g.ids_.push_back(id);
      return idx;
    };

    std::set<std::pair<int, int>> seen;
    for (const auto& s : specs) {
      if (s.u == s.v)
        throw Error("self_loop", s.where + ": self-loop at vertex '" + s.u + "'");
      if (!(s.weight > 0.0))
        throw Error("nonpositive_weight",
                    s.where + ": weight " + format_double(s.weight) +
                        " must be strictly positive");
      if (!(s.length > 0.0))
        throw Error("nonpositive_length",
                    s.where + ": length " + format_double(s.length) +
                        " must be strictly positive");
      int u = lookup(s.u, s.where);
      int v = lookup(s.v, s.where);
      auto key = std::minmax(u, v);
      if (!seen.insert(key).second)
        throw Error("duplicate_edge", s.where + ": duplicate edge '" + s.u +
                                          "'-'" + s.v + "'");
      g.edges_.push_back(Edge{u, v, s.weight, s.length});
    }

    const int n = static_cast<int>(g.ids_.size());
    g.adjacency_.assign(n, {});
    g.degrees_ = Eigen::VectorXd::Zero(n);
    for (const auto& e : g.edges_) {
      g.adjacency_[e.u].push_back(Neighbor{e.v, e.weight, e.length});
      g.adjacency_[e.v].push_back(Neighbor{e.u, e.weight, e.length});
      g.degrees_[e.u] += e.weight;
      g.degrees_[e.v] += e.weight;
    }
    for (auto& nbrs : g.adjacency_)
      std::sort(nbrs.begin(), nbrs.end(),
                [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
    for (int i = 0; i < n; ++i)
      if (g.adjacency_[i].empty())
        throw Error("isolated_vertex",
                    "vertex '" + g.ids_[i] + "' has no incident edge");
    if (n == 0) throw Error("empty_graph", "graph has no vertices");
    return g;
  }

  int vertex_count() const { return static_cast<int>(ids_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::string>& vertex_ids() const { return ids_; }
  const std::string& id_of(int index) const { return ids_[static_cast<size_t>(index)]; }

  int index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end())
      throw Error("unknown_vertex", "unknown vertex id '" + id + "'");
    return it->second;
  }
  bool has_vertex(const std::string& id) const { return index_.count(id) != 0; }

  const std::vector<Edge>& edges() const { return edges_; }
  /// Neighbors sorted by vertex index.
  const std::vector<Neighbor>& neighbors(int v) const {
    return adjacency_[static_cast<size_t>(v)];
  }
  /// Weighted degree d_u = sum of incident edge weights; strictly positive.
  double degree(int v) const { return degrees_[v]; }
  const Eigen::VectorXd& degrees() const { return degrees_; }

  bool has_edge(int u, int v) const {
    const auto& nbrs = adjacency_[static_cast<size_t>(u)];
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                               [](const Neighbor& a, int b) { return a.vertex < b; });
    return it != nbrs.end() && it->vertex == v;
  }
  const Neighbor& neighbor_edge(int u, int v) const {
    const auto& nbrs = adjacency_[static_cast<size_t>(u)];
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                               [](const Neighbor& a, int b) { return a.vertex < b; });
    if (it == nbrs.end() || it->vertex != v)
      throw Error("not_adjacent", "vertices '" + id_of(u) + "' and '" + id_of(v) +
                                      "' are not adjacent");
    return *it;
  }

  bool unit_weights() const {
    return std::all_of(edges_.begin(), edges_.end(),
                       [](const Edge& e) { return e.weight == 1.0; });
  }
  bool unit_lengths() const {
    return std::all_of(edges_.begin(), edges_.end(),
                       [](const Edge& e) { return e.length == 1.0; });
  }

  bool connected() const { return connected_components().size() == 1; }

  std::vector<std::vector<int>> connected_components() const {
    std::vector<int> all(ids_.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return components_within(all);
  }

  /// Connected components of the subgraph induced on `subset` (sorted indices).
  std::vector<std::vector<int>> components_within(std::span<const int> subset) const {
    std::vector<char> in(ids_.size(), 0), seen(ids_.size(), 0);
    for (int v : subset) in[static_cast<size_t>(v)] = 1;
    std::vector<std::vector<int>> comps;
    for (int start : subset) {
      if (seen[static_cast<size_t>(start)]) continue;
      std::vector<int> comp, stack{start};
      seen[static_cast<size_t>(start)] = 1;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        comp.push_back(v);
        for (const auto& nb : adjacency_[static_cast<size_t>(v)])
          if (in[static_cast<size_t>(nb.vertex)] && !seen[static_cast<size_t>(nb.vertex)]) {
            seen[static_cast<size_t>(nb.vertex)] = 1;
            stack.push_back(nb.vertex);
          }
      }
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
    return comps;
  }

private:
  WeightedGraph() = default;
  std::vector<std::string> ids_;
  std::map<std::string, int> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  Eigen::VectorXd degrees_;
};

/// Dirichlet scaffolding: interior S, derived boundary δS (vertices outside S
/// adjacent to S), closure S̄ = S ∪ δS. All index lists sorted ascending.
struct BoundaryPartition {
  std::vector<int> interior;
  std::vector<int> boundary;
  std::vector<int> closure;
  /// True when δS ≠ ∅ and every connected component of the induced subgraph
  /// on S has an edge into δS (the condition for the Dirichlet spectrum to be
  /// strictly positive).
  bool every_component_touches_boundary = false;
  /// Components of S with no edge into δS (empty when the flag is true).
  std::vector<std::vector<int>> stranded_components;
};

inline BoundaryPartition boundary_of(const WeightedGraph& g,
                                     std::span<const int> interior) {
  std::vector<char> in(static_cast<size_t>(g.vertex_count()), 0);
  for (int v : interior) {
    if (v < 0 || v >= g.vertex_count())
      throw Error("unknown_vertex",
                  "interior vertex index " + std::to_string(v) + " out of range");
    in[static_cast<size_t>(v)] = 1;
  }
  BoundaryPartition part;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (in[static_cast<size_t>(v)]) part.interior.push_back(v);

  std::vector<char> is_boundary(static_cast<size_t>(g.vertex_count()), 0);
  for (int v : part.interior)
    for (const auto& nb : g.neighbors(v))
      if (!in[static_cast<size_t>(nb.vertex)]) is_boundary[static_cast<size_t>(nb.vertex)] = 1;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (is_boundary[static_cast<size_t>(v)]) part.boundary.push_back(v);

  part.closure = part.interior;
  part.closure.insert(part.closure.end(), part.boundary.begin(), part.boundary.end());
  std::sort(part.closure.begin(), part.closure.end());

  for (auto& comp : g.components_within(part.interior)) {
    bool touches = false;
    for (int v : comp) {
      for (const auto& nb : g.neighbors(v))
        if (is_boundary[static_cast<size_t>(nb.vertex)]) {
          touches = true;
          break;
        }
      if (touches) break;
    }
    if (!touches) part.stranded_components.push_back(std::move(comp));
  }
  part.every_component_touches_boundary =
      !part.boundary.empty() && part.stranded_components.empty();
  return part;
}

inline BoundaryPartition boundary_of(const WeightedGraph& g,
                                     std::span<const std::string> interior_ids) {
  std::vector<int> interior;
  interior.reserve(interior_ids.size());
  for (const auto& id : interior_ids) interior.push_back(g.index_of(id));
  return boundary_of(g, interior);
}

/// Whole-graph partition (S = V, δS = ∅) for the boundaryless solvers.
inline BoundaryPartition whole_graph_partition(const WeightedGraph& g) {
  std::vector<int> all(static_cast<size_t>(g.vertex_count()));
  for (int v = 0; v < g.vertex_count(); ++v) all[static_cast<size_t>(v)] = v;
  return boundary_of(g, all);
}

/// Real-valued function on a declared vertex set. `domain` holds sorted graph
/// vertex indices; `values` is aligned with it.
struct VertexSignal {
  std::vector<int> domain;
  Eigen::VectorXd values;

  static VertexSignal zeros(std::vector<int> domain) {
    VertexSignal s;
    s.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(domain.size()));
    s.domain = std::move(domain);
    return s;
  }

  /// Builds a signal on exactly `domain` from an id→value map; every key must
  /// be a domain vertex and every domain vertex may default to `fill` when
  /// absent (`require_all` forbids the default).
  static VertexSignal from_map(const WeightedGraph& g,
                               const std::map<std::string, double>& values,
                               std::vector<int> domain, double fill = 0.0,
                               bool require_all = false) {
    VertexSignal s = zeros(std::move(domain));
    s.values.setConstant(fill);
    std::vector<char> touched(s.domain.size(), 0);
    for (const auto& [id, value] : values) {
      int v = g.index_of(id);
      auto it = std::lower_bound(s.domain.begin(), s.domain.end(), v);
      if (it == s.domain.end() || *it != v)
        throw Error("signal_domain",
                    "vertex '" + id + "' is outside the signal's domain");
      auto pos = static_cast<size_t>(it - s.domain.begin());
      s.values[static_cast<Eigen::Index>(pos)] = value;
      touched[pos] = 1;
    }
    if (require_all)
      for (size_t i = 0; i < touched.size(); ++i)
        if (!touched[i])
          throw Error("signal_domain", "no value given for vertex '" +
                                           g.id_of(s.domain[i]) + "'");
    return s;
  }

  int find(int vertex) const {
    auto it = std::lower_bound(domain.begin(), domain.end(), vertex);
    if (it == domain.end() || *it != vertex) return -1;
    return static_cast<int>(it - domain.begin());
  }

  double at(int vertex) const {
    int pos = find(vertex);
    if (pos < 0)
      throw Error("signal_domain", "vertex index " + std::to_string(vertex) +
                                       " is outside the signal's domain");
    return values[pos];
  }

  bool same_domain(std::span<const int> other) const {
    return std::equal(domain.begin(), domain.end(), other.begin(), other.end());
  }
};

// ---------------------------------------------------------------------------
// File formats.
//
// TSV: one edge per line, `u<TAB>v<TAB>weight[<TAB>length]`, '#' comments.
// JSON: {"vertices":[...], "edges":[{"u":..,"v":..,"w":..,"l":..}]} with "l"
// optional (default 1).
// ---------------------------------------------------------------------------

namespace detail {

inline WeightedGraph parse_graph_tsv(const std::string& text) {
  std::vector<WeightedGraph::EdgeSpec> specs;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const std::string where = "line " + std::to_string(lineno);

    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
      size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (fields.size() < 3 || fields.size() > 4)
      throw Error("malformed_line",
                  where + ": expected 'u<TAB>v<TAB>weight[<TAB>length]', got " +
                      std::to_string(fields.size()) + " field(s)");
    WeightedGraph::EdgeSpec s;
    s.u = fields[0];
    s.v = fields[1];
    s.where = where;
    if (s.u.empty() || s.v.empty())
      throw Error("malformed_line", where + ": empty vertex id");
    if (!parse_double(fields[2], s.weight))
      throw Error("malformed_line",
                  where + ": field 3: '" + fields[2] + "' is not a number");
    if (fields.size() == 4 && !parse_double(fields[3], s.length))
      throw Error("malformed_line",
                  where + ": field 4: '" + fields[3] + "' is not a number");
    specs.push_back(std::move(s));
  }
  return WeightedGraph::build({}, specs);
}

inline WeightedGraph parse_graph_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error("malformed_json", e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
    throw Error("malformed_json",
                "expected an object with 'vertices' and 'edges' arrays");
  std::vector<std::string> ids;
  for (const auto& v : doc["vertices"]) {
    if (!v.is_string())
      throw Error("malformed_json", "vertex ids must be strings");
    ids.push_back(v.get<std::string>());
  }
  std::vector<WeightedGraph::EdgeSpec> specs;
  int k = 0;
  for (const auto& e : doc["edges"]) {
    const std::string where = "edges[" + std::to_string(k++) + "]";
    if (!e.is_object() || !e.contains("u") || !e.contains("v") || !e.contains("w"))
      throw Error("malformed_json", where + ": expected {u, v, w[, l]}");
    WeightedGraph::EdgeSpec s;
    if (!e["u"].is_string() || !e["v"].is_string())
      throw Error("malformed_json", where + ": u and v must be vertex id strings");
    s.u = e["u"].get<std::string>();
    s.v = e["v"].get<std::string>();
    if (!e["w"].is_number())
      throw Error("malformed_json", where + ": w must be a number");
    s.weight = e["w"].get<double>();
    if (e.contains("l")) {
      if (!e["l"].is_number())
        throw Error("malformed_json", where + ": l must be a number");
      s.length = e["l"].get<double>();
    }
    s.where = where;
    specs.push_back(std::move(s));
  }
  return WeightedGraph::build(std::move(ids), specs);
}

}  // namespace detail

/// Parses either format; JSON is detected by a leading '{'.
inline WeightedGraph parse_graph(const std::string& text) {
  size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return detail::parse_graph_json(text);
  return detail::parse_graph_tsv(text);
}

inline std::string serialize_graph_tsv(const WeightedGraph& g) {
  std::string out;
  for (const auto& e : g.edges()) {
    out += g.id_of(e.u);
    out += '\t';
    out += g.id_of(e.v);
    out += '\t';
    out += format_double(e.weight);
    if (e.length != 1.0) {
      out += '\t';
      out += format_double(e.length);
    }
    out += '\n';
  }
  return out;
}

inline std::string serialize_graph_json(const WeightedGraph& g) {
  nlohmann::json doc;
  doc["vertices"] = g.vertex_ids();
  doc["edges"] = nlohmann::json::array();
  for (const auto& e : g.edges()) {
    nlohmann::json je;
    je["u"] = g.id_of(e.u);
    je["v"] = g.id_of(e.v);
    je["w"] = e.weight;
    if (e.length != 1.0) je["l"] = e.length;
    doc["edges"].push_back(std::move(je));
  }
  return doc.dump(2) + "\n";
}

/// Parses a boundary file: a JSON list of interior vertex ids.
inline std::vector<std::string> parse_interior_list(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error("malformed_json", e.what());
  }
  if (!doc.is_array())
    throw Error("malformed_json", "expected a JSON list of interior vertex ids");
  std::vector<std::string> ids;
  for (const auto& v : doc) {
    if (!v.is_string())
      throw Error("malformed_json", "interior vertex ids must be strings");
    ids.push_back(v.get<std::string>());
  }
  return ids;
}

}  // namespace graphpde
