#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphpde/graph.hpp"

namespace graphpde {

enum class OperatorKind {
  Combinatorial,        ///< L = T − W
  Discrete,             ///< Δ = T⁻¹L
  Normalized,           ///< 𝓛 = T^(−1/2) L T^(−1/2)
  NormalizedAdjacency,  ///< Ã, rows normalized to sum to 1
};

inline const char* to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::Combinatorial: return "combinatorial";
    case OperatorKind::Discrete: return "discrete";
    case OperatorKind::Normalized: return "normalized";
    case OperatorKind::NormalizedAdjacency: return "adjacency";
  }
  return "?";
}

/// Dense operator with its vertex bookkeeping: row/column i of `entries`
/// belongs to graph vertex `vertices[i]`.
struct OperatorMatrix {
  OperatorKind kind;
  Eigen::MatrixXd entries;
  std::vector<int> vertices;
};

namespace detail {
inline std::vector<int> all_vertices(const WeightedGraph& g) {
  std::vector<int> v(static_cast<size_t>(g.vertex_count()));
  for (int i = 0; i < g.vertex_count(); ++i) v[static_cast<size_t>(i)] = i;
  return v;
}
}  // namespace detail

/// L(u,u) = d_u, L(u,v) = −w_(u,v) on edges, 0 otherwise.
inline OperatorMatrix combinatorial_laplacian(const WeightedGraph& g) {
  const int n = g.vertex_count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u) m(u, u) = g.degree(u);
  for (const auto& e : g.edges()) {
    m(e.u, e.v) = -e.weight;
    m(e.v, e.u) = -e.weight;
  }
  return {OperatorKind::Combinatorial, std::move(m), detail::all_vertices(g)};
}

/// Δ = T⁻¹L. Row u of L scaled by 1/d_u.
inline OperatorMatrix discrete_laplacian(const WeightedGraph& g) {
  OperatorMatrix m = combinatorial_laplacian(g);
  for (int u = 0; u < g.vertex_count(); ++u) m.entries.row(u) /= g.degree(u);
  m.kind = OperatorKind::Discrete;
  return m;
}

/// 𝓛 = T^(−1/2) L T^(−1/2); symmetric, same spectrum as Δ. Assembled
/// entrywise (unit diagonal, −w/√(d_u d_v) on edges) so the diagonal is
/// exactly 1.
inline OperatorMatrix normalized_laplacian(const WeightedGraph& g) {
  const int n = g.vertex_count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (const auto& e : g.edges()) {
    const double off = -e.weight / std::sqrt(g.degree(e.u) * g.degree(e.v));
    m(e.u, e.v) = off;
    m(e.v, e.u) = off;
  }
  return {OperatorKind::Normalized, std::move(m), detail::all_vertices(g)};
}

/// Ã(u,v) = w_(u,v)/d_u on edges; rows sum to 1 and Δ = I − Ã holds exactly.
inline OperatorMatrix normalized_adjacency(const WeightedGraph& g) {
  const int n = g.vertex_count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    m(e.u, e.v) = e.weight / g.degree(e.u);
    m(e.v, e.u) = e.weight / g.degree(e.v);
  }
  return {OperatorKind::NormalizedAdjacency, std::move(m), detail::all_vertices(g)};
}

/// Principal submatrix on the interior vertices of `part` (Dirichlet
/// restriction); the operator must be indexed on all of V.
inline OperatorMatrix restrict_to(const OperatorMatrix& m,
                                  const BoundaryPartition& part) {
  if (part.interior.empty()) throw Error("empty_interior", "interior set is empty");
  if (static_cast<int>(m.vertices.size()) !=
      static_cast<int>(m.entries.rows()))
    throw Error("index_mismatch", "operator index map is inconsistent");
  // Identity restriction keeps the matrix untouched.
  const auto s = static_cast<Eigen::Index>(part.interior.size());
  OperatorMatrix out;
  out.kind = m.kind;
  out.vertices = part.interior;
  out.entries.resize(s, s);
  std::vector<int> row_of(m.vertices.size());
  for (size_t i = 0; i < m.vertices.size(); ++i)
    row_of[static_cast<size_t>(m.vertices[i])] = static_cast<int>(i);
  for (Eigen::Index i = 0; i < s; ++i)
    for (Eigen::Index j = 0; j < s; ++j)
      out.entries(i, j) = m.entries(row_of[static_cast<size_t>(part.interior[static_cast<size_t>(i)])],
                                    row_of[static_cast<size_t>(part.interior[static_cast<size_t>(j)])]);
  return out;
}

/// Degrees of the interior vertices in partition order (full-graph degrees).
inline Eigen::VectorXd interior_degrees(const WeightedGraph& g,
                                        std::span<const int> vertices) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(vertices.size()));
  for (size_t i = 0; i < vertices.size(); ++i) d[static_cast<Eigen::Index>(i)] = g.degree(vertices[i]);
  return d;
}

}  // namespace graphpde
