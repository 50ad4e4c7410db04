#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "graphpde/dirichlet.hpp"

namespace graphpde {

/// Discrete Green's functions assembled from the spectrum, never from
/// elimination: 𝓖(x,y) = Σᵢ λᵢ⁻¹ φᵢ(x)φᵢ(y) over the positive part of the
/// spectrum, and G = T^(−1/2) 𝓖 T^(1/2). With a boundary 𝓖 inverts 𝓛_S and
/// G·Δ_S = I; without one they invert on the complement of φ₀.
struct GreensFunction {
  Eigen::MatrixXd normalized;    ///< 𝓖 on S×S
  Eigen::MatrixXd unnormalized;  ///< G = T^(−1/2) 𝓖 T^(1/2)
  BoundaryPartition partition;
  Spectrum spectrum;
  std::vector<int> vertices;  ///< row/column ↔ graph vertex

  /// Zero-extension of 𝓖 to V×V without copying the S-indexed storage.
  double normalized_at(int u, int v) const { return entry(normalized, u, v); }
  double unnormalized_at(int u, int v) const { return entry(unnormalized, u, v); }

private:
  double entry(const Eigen::MatrixXd& m, int u, int v) const {
    auto row = std::lower_bound(vertices.begin(), vertices.end(), u);
    auto col = std::lower_bound(vertices.begin(), vertices.end(), v);
    if (row == vertices.end() || *row != u || col == vertices.end() || *col != v)
      return 0.0;
    return m(row - vertices.begin(), col - vertices.begin());
  }
};

namespace detail {

inline GreensFunction greens_from(const WeightedGraph& g, DirichletSpectrum ds,
                                  BoundaryPartition part) {
  const Eigen::Index s = ds.size();
  Eigen::MatrixXd gg = Eigen::MatrixXd::Zero(s, s);
  if (ds.boundaryless) {
    // Assemble from projected eigenvectors so 𝓖φ₀ vanishes identically and
    // symmetry is exact in floating point.
    const Eigen::VectorXd& phi0 = *ds.spectrum.null_vector;
    for (Eigen::Index i = 1; i < s; ++i) {
      Eigen::VectorXd w = ds.spectrum.eigenvectors.col(i);
      w -= phi0 * phi0.dot(w);
      gg += (w * w.transpose()) / ds.spectrum.eigenvalues[i];
    }
  } else {
    for (Eigen::Index i = 0; i < s; ++i) {
      const auto& phi = ds.spectrum.eigenvectors.col(i);
      gg += (phi * phi.transpose()) / ds.spectrum.eigenvalues[i];
    }
  }
  GreensFunction out;
  out.unnormalized.resize(s, s);
  for (Eigen::Index x = 0; x < s; ++x)
    for (Eigen::Index y = 0; y < s; ++y)
      out.unnormalized(x, y) = gg(x, y) * std::sqrt(ds.degrees[y] / ds.degrees[x]);
  out.normalized = std::move(gg);
  out.partition = std::move(part);
  out.spectrum = std::move(ds.spectrum);
  out.vertices = std::move(ds.vertices);
  return out;
}

}  // namespace detail

/// Green's function of 𝓛_S / Δ_S for a partition with δS ≠ ∅ whose interior
/// components all touch the boundary.
inline GreensFunction greens_dirichlet(const WeightedGraph& g,
                                       const BoundaryPartition& part) {
  if (part.boundary.empty())
    throw Error("empty_boundary",
                "partition has no boundary; use greens_boundaryless");
  return detail::greens_from(g, dirichlet_spectrum(g, part), part);
}

/// Boundaryless Green's function on a connected graph: 𝓖𝓛 = 𝓛𝓖 = I − φ₀φ₀ᵀ
/// and 𝓖φ₀ = 0, with the analytic φ₀(k) = √(d_k/Σd).
inline GreensFunction greens_boundaryless(const WeightedGraph& g) {
  BoundaryPartition part = whole_graph_partition(g);
  return detail::greens_from(g, dirichlet_spectrum(g, part), part);
}

}  // namespace graphpde
