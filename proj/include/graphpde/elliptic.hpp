#pragma once

#include <utility>

#include <Eigen/Dense>

#include "graphpde/dirichlet.hpp"
#include "graphpde/greens.hpp"

namespace graphpde {

/// Dirichlet problem data: Δf = gfun on S with f = σ on δS (gfun ≡ 0 for the
/// Laplace equation).
struct DirichletProblem {
  const WeightedGraph* graph = nullptr;
  BoundaryPartition partition;
  VertexSignal boundary_values;  ///< σ on exactly δS
  VertexSignal source;           ///< gfun on exactly S

  static DirichletProblem laplace(const WeightedGraph& g, BoundaryPartition part,
                                  VertexSignal sigma) {
    DirichletProblem p;
    p.graph = &g;
    p.source = VertexSignal::zeros(part.interior);
    p.partition = std::move(part);
    p.boundary_values = std::move(sigma);
    p.validate();
    return p;
  }

  static DirichletProblem poisson(const WeightedGraph& g, BoundaryPartition part,
                                  VertexSignal sigma, VertexSignal gfun) {
    DirichletProblem p;
    p.graph = &g;
    p.partition = std::move(part);
    p.boundary_values = std::move(sigma);
    p.source = std::move(gfun);
    p.validate();
    return p;
  }

  void validate() const {
    if (!boundary_values.same_domain(partition.boundary))
      throw Error("signal_domain", "boundary values must live on exactly the boundary");
    if (!source.same_domain(partition.interior))
      throw Error("signal_domain", "source must live on exactly the interior");
  }
};

/// (Δf)(x) = Σ_{(x,y)∈E} (f(x) − f(y))·w_(x,y)/d_x for x ∈ S, given f on the
/// closure. The residual workhorse for every solver check.
inline Eigen::VectorXd apply_discrete_laplacian(const WeightedGraph& g,
                                                const BoundaryPartition& part,
                                                const VertexSignal& f) {
  if (!f.same_domain(part.closure))
    throw Error("signal_domain", "signal must live on the closure");
  Eigen::VectorXd out(static_cast<Eigen::Index>(part.interior.size()));
  for (size_t i = 0; i < part.interior.size(); ++i) {
    const int x = part.interior[i];
    double sum = 0.0;
    for (const auto& nb : g.neighbors(x))
      sum += (f.at(x) - f.at(nb.vertex)) * nb.weight / g.degree(x);
    out[static_cast<Eigen::Index>(i)] = sum;
  }
  return out;
}

namespace detail {

/// Boundary flux b(x) = Σ_{y∈δS,(x,y)∈E} w_(x,y) σ(y) for x ∈ S, the driving
/// term the boundary data induces on the interior.
inline Eigen::VectorXd boundary_flux(const WeightedGraph& g,
                                     const BoundaryPartition& part,
                                     const VertexSignal& sigma) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(part.interior.size()));
  for (size_t i = 0; i < part.interior.size(); ++i)
    for (const auto& nb : g.neighbors(part.interior[i])) {
      int pos = sigma.find(nb.vertex);
      if (pos >= 0) b[static_cast<Eigen::Index>(i)] += nb.weight * sigma.values[pos];
    }
  return b;
}

/// Interior harmonic extension through the eigenbasis:
/// f(z) = d_z^(−1/2) Σᵢ λᵢ⁻¹ φᵢ(z) Σ_{x∈S,(x,y)∈E,y∈δS} d_x^(−1/2) φᵢ(x) w_(x,y) σ(y).
inline Eigen::VectorXd harmonic_interior(const WeightedGraph& g,
                                         const DirichletSpectrum& ds,
                                         const BoundaryPartition& part,
                                         const VertexSignal& sigma) {
  const Eigen::VectorXd b = boundary_flux(g, part, sigma);
  const Eigen::VectorXd inv_sqrt_d = ds.degrees.cwiseSqrt().cwiseInverse();
  Eigen::VectorXd coeffs =
      ds.spectrum.eigenvectors.transpose() * (inv_sqrt_d.asDiagonal() * b);
  coeffs.array() /= ds.spectrum.eigenvalues.array();
  return inv_sqrt_d.asDiagonal() * (ds.spectrum.eigenvectors * coeffs);
}

inline VertexSignal closure_signal(const BoundaryPartition& part,
                                   const Eigen::VectorXd& interior_values,
                                   const VertexSignal& sigma) {
  VertexSignal out = VertexSignal::zeros(part.closure);
  for (size_t i = 0; i < part.interior.size(); ++i)
    out.values[out.find(part.interior[i])] = interior_values[static_cast<Eigen::Index>(i)];
  for (size_t i = 0; i < part.boundary.size(); ++i)
    out.values[out.find(part.boundary[i])] = sigma.values[static_cast<Eigen::Index>(i)];
  return out;
}

}  // namespace detail

/// Solves Δf = 0 on S with f = σ on δS; returns f on the closure (σ copied
/// onto the boundary).
inline VertexSignal solve_laplace(const DirichletProblem& p) {
  if (p.partition.boundary.empty())
    throw Error("empty_boundary", "the Laplace solver needs a nonempty boundary");
  DirichletSpectrum ds = dirichlet_spectrum(*p.graph, p.partition);
  Eigen::VectorXd f = detail::harmonic_interior(*p.graph, ds, p.partition,
                                                p.boundary_values);
  return detail::closure_signal(p.partition, f, p.boundary_values);
}

/// Solves Δf = gfun on S with f = σ on δS as f₁ + f₂: f₁ harmonic with the
/// boundary data, f₂ = G·gfun zero-extended to δS.
inline VertexSignal solve_poisson(const DirichletProblem& p) {
  if (p.partition.boundary.empty())
    throw Error("empty_boundary", "the Poisson solver needs a nonempty boundary");
  DirichletSpectrum ds = dirichlet_spectrum(*p.graph, p.partition);
  Eigen::VectorXd f = detail::harmonic_interior(*p.graph, ds, p.partition,
                                                p.boundary_values);

  // f₂ through the same spectrum: G g = T^(−1/2) 𝓖 T^(1/2) g.
  const Eigen::VectorXd sqrt_d = ds.degrees.cwiseSqrt();
  Eigen::VectorXd coeffs = ds.spectrum.eigenvectors.transpose() *
                           (sqrt_d.asDiagonal() * p.source.values);
  coeffs.array() /= ds.spectrum.eigenvalues.array();
  f += sqrt_d.cwiseInverse().asDiagonal() * (ds.spectrum.eigenvectors * coeffs);

  return detail::closure_signal(p.partition, f, p.boundary_values);
}

}  // namespace graphpde
