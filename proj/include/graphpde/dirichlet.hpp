#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphpde/graph.hpp"
#include "graphpde/laplacian.hpp"
#include "graphpde/spectral.hpp"

namespace graphpde {

/// Eigenvalues below 1e−10·max(1, λ_max) count as the null space.
inline double null_space_cutoff(const Eigen::VectorXd& eigenvalues) {
  double lmax = eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
  return 1e-10 * std::max(1.0, lmax);
}

/// The vector spanning the null space of 𝓛 on a connected graph:
/// φ₀(k) = √(d_k / Σᵢ dᵢ).
inline Eigen::VectorXd analytic_null_vector(const WeightedGraph& g) {
  const double total = g.degrees().sum();
  Eigen::VectorXd phi0(g.vertex_count());
  for (int k = 0; k < g.vertex_count(); ++k)
    phi0[k] = std::sqrt(g.degree(k) / total);
  return phi0;
}

/// Shared engine state behind every boundary-value solver: the spectrum of
/// 𝓛_S (δS ≠ ∅) or of 𝓛 with the analytic φ₀ substituted for the computed
/// null eigenvector (δS = ∅), plus the vertex list and full-graph degrees.
struct DirichletSpectrum {
  Spectrum spectrum;
  std::vector<int> vertices;  ///< S (or V), sorted ascending
  Eigen::VectorXd degrees;    ///< d_x for `vertices`
  bool boundaryless = false;

  Eigen::Index size() const { return spectrum.size(); }
  /// Index of the zero mode, or -1 when the spectrum is strictly positive.
  Eigen::Index zero_mode() const { return boundaryless ? 0 : -1; }
};

namespace detail {

inline std::string id_list(const WeightedGraph& g, const std::vector<int>& vs) {
  std::string out;
  for (size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ", ";
    out += g.id_of(vs[i]);
  }
  return out;
}

}  // namespace detail

/// Builds the engine. For δS ≠ ∅ requires every connected component of S to
/// touch δS (so λ₁ > 0); for δS = ∅ requires a connected graph and S = V.
inline DirichletSpectrum dirichlet_spectrum(const WeightedGraph& g,
                                            const BoundaryPartition& part) {
  DirichletSpectrum ds;
  if (part.boundary.empty()) {
    if (static_cast<int>(part.interior.size()) != g.vertex_count())
      throw Error("interior_mismatch",
                  "empty boundary requires the interior to be all of V");
    auto comps = g.connected_components();
    if (comps.size() != 1)
      throw Error("disconnected_graph",
                  "graph has " + std::to_string(comps.size()) +
                      " components; the boundaryless solvers need one");
    ds.boundaryless = true;
    ds.vertices = part.interior;
    ds.degrees = interior_degrees(g, ds.vertices);
    ds.spectrum = eigendecompose_symmetric(normalized_laplacian(g).entries);
    const double cutoff = null_space_cutoff(ds.spectrum.eigenvalues);
    Eigen::Index zeros = 0;
    while (zeros < ds.spectrum.size() && ds.spectrum.eigenvalues[zeros] <= cutoff)
      ++zeros;
    if (zeros != 1)
      throw Error("null_space",
                  "expected a one-dimensional null space, found dimension " +
                      std::to_string(zeros));
    Eigen::VectorXd phi0 = analytic_null_vector(g);
    ds.spectrum.eigenvalues[0] = 0.0;
    ds.spectrum.eigenvectors.col(0) = phi0;
    ds.spectrum.null_vector = std::move(phi0);
    return ds;
  }

  if (part.interior.empty())
    throw Error("empty_interior", "interior set is empty");
  if (!part.every_component_touches_boundary)
    throw Error("stranded_component",
                "interior component {" +
                    detail::id_list(g, part.stranded_components.front()) +
                    "} has no edge into the boundary; its Dirichlet operator is singular");
  ds.vertices = part.interior;
  ds.degrees = interior_degrees(g, ds.vertices);
  ds.spectrum = eigendecompose_symmetric(
      restrict_to(normalized_laplacian(g), part).entries);
  if (ds.spectrum.eigenvalues[0] <= null_space_cutoff(ds.spectrum.eigenvalues))
    throw Error("singular_operator",
                "Dirichlet spectrum is not strictly positive (lambda_1 = " +
                    format_double(ds.spectrum.eigenvalues[0]) + ")");
  return ds;
}

}  // namespace graphpde
