#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "graphpde/dirichlet.hpp"

namespace graphpde {

/// Time-dependent boundary data on a uniform grid 0 = t₀ < t₁ < … < t_m,
/// interpreted as piecewise-constant on [t_k, t_{k+1}) and right-continuous
/// at the samples. Columns follow the partition's boundary order.
struct BoundarySignal {
  std::vector<int> boundary;  ///< sorted vertex indices, = partition boundary
  double dt = 0.0;
  Eigen::MatrixXd values;  ///< samples × |δS|

  int samples() const { return static_cast<int>(values.rows()); }
  double span() const { return samples() <= 1 ? 0.0 : dt * (samples() - 1); }

  static BoundarySignal empty() { return BoundarySignal{}; }

  /// σ(z, t) ≡ value for every boundary vertex over [0, t_end].
  static BoundarySignal constant(const BoundaryPartition& part, double value,
                                 double t_end) {
    BoundarySignal s;
    s.boundary = part.boundary;
    s.dt = t_end > 0.0 ? t_end : 1.0;
    s.values = Eigen::MatrixXd::Constant(2, static_cast<Eigen::Index>(s.boundary.size()), value);
    return s;
  }

  static BoundarySignal sampled(const BoundaryPartition& part, double dt,
                                Eigen::MatrixXd samples) {
    if (samples.cols() != static_cast<Eigen::Index>(part.boundary.size()))
      throw Error("signal_domain",
                  "boundary signal must cover exactly the boundary vertices");
    if (samples.rows() < 1) throw Error("empty_grid", "no time samples");
    if (samples.rows() > 1 && !(dt > 0.0))
      throw Error("bad_grid", "grid spacing must be positive");
    BoundarySignal s;
    s.boundary = part.boundary;
    s.dt = dt;
    s.values = std::move(samples);
    return s;
  }

  void require_span(double t) const {
    if (t < 0.0 || t > span() + 1e-12 * std::max(1.0, std::abs(t)))
      throw Error("grid_gap", "boundary signal grid does not cover t = " +
                                  format_double(t));
  }

  /// Sample interval containing t (right-continuous; t = t_m maps to the last
  /// sample).
  int interval_of(double t) const {
    if (samples() <= 1) return 0;
    int k = static_cast<int>(std::floor(t / dt));
    return std::min(std::max(k, 0), samples() - 1);
  }

  double value_at(Eigen::Index column, double t) const {
    require_span(t);
    return values(interval_of(t), column);
  }
};

namespace detail {

/// ∫_{τa}^{τb} e^(−λ(t−τ)) dτ = (1 − e^(−λΔτ))·e^(−λ(t−τb))/λ, and Δτ for the
/// zero mode. Evaluated through expm1 so nearby samples do not cancel.
inline double heat_mode_integral(double lambda, double t, double tau_a, double tau_b) {
  const double dtau = tau_b - tau_a;
  if (lambda == 0.0) return dtau;
  return -std::expm1(-lambda * dtau) * std::exp(-lambda * (t - tau_b)) / lambda;
}

/// B_σ(y, t_k) = Σ_{z∈δS,(y,z)∈E} σ(z, t_k) w_(y,z) / d_y over the interior
/// list; zero where no boundary neighbor exists.
inline Eigen::VectorXd boundary_forcing(const WeightedGraph& g,
                                        std::span<const int> interior,
                                        const BoundarySignal& sigma, int k) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(interior.size()));
  for (size_t i = 0; i < interior.size(); ++i) {
    const double d = g.degree(interior[i]);
    for (const auto& nb : g.neighbors(interior[i])) {
      auto it = std::lower_bound(sigma.boundary.begin(), sigma.boundary.end(), nb.vertex);
      if (it != sigma.boundary.end() && *it == nb.vertex)
        b[static_cast<Eigen::Index>(i)] +=
            sigma.values(k, it - sigma.boundary.begin()) * nb.weight / d;
    }
  }
  return b;
}

/// Applies the √(d_col/d_row) factor that turns a symmetric modal sum into
/// the kernel for Δ.
inline Eigen::MatrixXd degree_skew(const Eigen::MatrixXd& sym,
                                   const Eigen::VectorXd& degrees) {
  Eigen::MatrixXd out(sym.rows(), sym.cols());
  for (Eigen::Index u = 0; u < sym.rows(); ++u)
    for (Eigen::Index v = 0; v < sym.cols(); ++v)
      out(u, v) = sym(u, v) * std::sqrt(degrees[v] / degrees[u]);
  return out;
}

inline void check_kernel_inputs(const BoundaryPartition& part,
                                const VertexSignal& f, const BoundarySignal& sigma,
                                double t) {
  if (t < 0.0) throw Error("negative_time", "solver needs t >= 0");
  if (!f.same_domain(part.interior))
    throw Error("signal_domain", "initial data must live on exactly the interior");
  if (part.boundary.empty()) {
    if (!sigma.boundary.empty())
      throw Error("signal_domain",
                  "boundary signal given but the partition has no boundary");
    return;
  }
  if (!std::equal(sigma.boundary.begin(), sigma.boundary.end(),
                  part.boundary.begin(), part.boundary.end()))
    throw Error("signal_domain",
                "boundary signal must cover exactly the boundary vertices");
  if (t > 0.0) sigma.require_span(t);
}

/// Adds Σ_k ModeIntegral(λᵢ, τ_k, τ_{k+1}) · ⟨φᵢ, T^(1/2) B_k⟩ to `coeffs`,
/// walking σ's piecewise-constant intervals clipped to [0, t].
template <class ModeIntegral>
void accumulate_forcing(const WeightedGraph& g, const DirichletSpectrum& engine,
                        const BoundarySignal& sigma, double t,
                        Eigen::VectorXd& coeffs, ModeIntegral integral) {
  if (sigma.boundary.empty() || t <= 0.0) return;
  const Eigen::VectorXd sqrt_d = engine.degrees.cwiseSqrt();
  const int intervals = std::max(sigma.samples() - 1, 1);
  for (int k = 0; k < intervals; ++k) {
    const double ta = k * sigma.dt;
    if (ta >= t) break;
    const double tb = std::min((k + 1) * sigma.dt, t);
    Eigen::VectorXd w = engine.spectrum.eigenvectors.transpose() *
                        (sqrt_d.asDiagonal() *
                         boundary_forcing(g, engine.vertices, sigma, k));
    for (Eigen::Index i = 0; i < coeffs.size(); ++i)
      coeffs[i] += integral(engine.spectrum.eigenvalues[i], ta, tb) * w[i];
    if (tb >= t) break;
  }
}

inline VertexSignal assemble_closure(const BoundaryPartition& part,
                                     const Eigen::VectorXd& interior,
                                     const BoundarySignal& sigma, double t,
                                     double boundary_scale = 1.0) {
  VertexSignal out = VertexSignal::zeros(part.closure);
  for (size_t i = 0; i < part.interior.size(); ++i)
    out.values[out.find(part.interior[i])] = interior[static_cast<Eigen::Index>(i)];
  for (size_t i = 0; i < part.boundary.size(); ++i)
    out.values[out.find(part.boundary[i])] =
        boundary_scale * sigma.value_at(static_cast<Eigen::Index>(i), t);
  return out;
}

}  // namespace detail

/// Heat kernel K_S(u,v,t) = Σᵢ e^(−λᵢ t) φᵢ(u) φᵢ(v) √(d_v/d_u) together with
/// the solution operator of u_t = −Δu on S with Dirichlet data on δS. The
/// spectrum is computed once and shared by every evaluation; with δS = ∅ the
/// zero mode enters through the analytic φ₀ and σ must be empty.
class HeatKernel {
public:
  HeatKernel(const WeightedGraph& g, BoundaryPartition part)
      : graph_(&g), partition_(std::move(part)),
        engine_(dirichlet_spectrum(g, partition_)) {}

  const BoundaryPartition& partition() const { return partition_; }
  const Spectrum& spectrum() const { return engine_.spectrum; }
  const std::vector<int>& vertices() const { return engine_.vertices; }

  /// K_S(·,·,t) as a dense matrix on S×S.
  Eigen::MatrixXd at(double t) const {
    if (t < 0.0) throw Error("negative_time", "heat kernel needs t >= 0");
    const Eigen::Index s = engine_.size();
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(s, s);
    for (Eigen::Index i = 0; i < s; ++i) {
      const auto& phi = engine_.spectrum.eigenvectors.col(i);
      sym += std::exp(-engine_.spectrum.eigenvalues[i] * t) * (phi * phi.transpose());
    }
    return detail::degree_skew(sym, engine_.degrees);
  }

  /// u(x,t) = ⟨K_S(x,·,t), f⟩_S + ∫₀ᵗ ⟨K_S(x,·,t−τ), B_σ(·,τ)⟩ dτ with the
  /// integral taken exactly over each piecewise-constant interval of σ.
  /// Boundary rows of the result carry σ(·,t).
  VertexSignal solve(const VertexSignal& f, const BoundarySignal& sigma,
                     double t) const {
    detail::check_kernel_inputs(partition_, f, sigma, t);
    const Eigen::VectorXd sqrt_d = engine_.degrees.cwiseSqrt();

    Eigen::VectorXd coeffs =
        engine_.spectrum.eigenvectors.transpose() * (sqrt_d.asDiagonal() * f.values);
    for (Eigen::Index i = 0; i < coeffs.size(); ++i)
      coeffs[i] *= std::exp(-engine_.spectrum.eigenvalues[i] * t);

    detail::accumulate_forcing(*graph_, engine_, sigma, t, coeffs,
                               [&](double lambda, double ta, double tb) {
                                 return detail::heat_mode_integral(lambda, t, ta, tb);
                               });

    Eigen::VectorXd interior =
        sqrt_d.cwiseInverse().asDiagonal() * (engine_.spectrum.eigenvectors * coeffs);
    return detail::assemble_closure(partition_, interior, sigma, t);
  }

private:
  const WeightedGraph* graph_;
  BoundaryPartition partition_;
  DirichletSpectrum engine_;
};

/// One-shot kernel matrix K_S(·,·,t).
inline Eigen::MatrixXd heat_kernel(const WeightedGraph& g,
                                   const BoundaryPartition& part, double t) {
  return HeatKernel(g, part).at(t);
}

/// B_σ(y,t) = Σ_{z∈δS,(y,z)∈E} σ(z,t) w_(y,z) / d_y on S; zero at interior
/// vertices with no boundary neighbor.
inline VertexSignal derived_forcing(const WeightedGraph& g,
                                    const BoundaryPartition& part,
                                    const BoundarySignal& sigma, double t) {
  if (!std::equal(sigma.boundary.begin(), sigma.boundary.end(),
                  part.boundary.begin(), part.boundary.end()))
    throw Error("signal_domain",
                "boundary signal must cover exactly the boundary vertices");
  sigma.require_span(t);
  VertexSignal out = VertexSignal::zeros(part.interior);
  out.values = detail::boundary_forcing(g, part.interior, sigma, sigma.interval_of(t));
  return out;
}

/// Full solve of u_t = −Δu, u(·,0) = f on S, u = σ on δS.
inline VertexSignal solve_heat(const WeightedGraph& g, const BoundaryPartition& part,
                               const VertexSignal& f, const BoundarySignal& sigma,
                               double t) {
  return HeatKernel(g, part).solve(f, sigma, t);
}

}  // namespace graphpde
