#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "graphpde/heat.hpp"

namespace graphpde {

/// Position/velocity pair on the closure at a point in time.
struct WaveState {
  VertexSignal position;
  VertexSignal velocity;
  double time = 0.0;
};

namespace detail {

/// ∫_{τa}^{τb} sin(√λ(t−τ))/√λ dτ; the zero mode integrates (t−τ).
inline double wave_mode_integral(double lambda, double t, double tau_a, double tau_b) {
  if (lambda == 0.0)
    return ((t - tau_a) * (t - tau_a) - (t - tau_b) * (t - tau_b)) / 2.0;
  const double om = std::sqrt(lambda);
  return (std::cos(om * (t - tau_b)) - std::cos(om * (t - tau_a))) / lambda;
}

/// ∫_{τa}^{τb} cos(√λ(t−τ)) dτ; the zero mode integrates 1.
inline double wave_mode_integral_dt(double lambda, double t, double tau_a,
                                    double tau_b) {
  if (lambda == 0.0) return tau_b - tau_a;
  const double om = std::sqrt(lambda);
  return (std::sin(om * (t - tau_a)) - std::sin(om * (t - tau_b))) / om;
}

}  // namespace detail

/// Wave kernel
///   W_S(x,y,t) = [t·φ₀(x)φ₀(y) + Σ_{λᵢ>0} sin(√λᵢ t)/√λᵢ · φᵢ(x)φᵢ(y)]·√(d_y/d_x)
/// where the t·φ₀φ₀ᵀ term is present exactly when the spectrum contains a
/// zero mode (δS = ∅); a Dirichlet spectrum is strictly positive and the term
/// drops out. ∂ₜW_S replaces the modal coefficients with cos(√λᵢ t) and the
/// zero-mode ramp with φ₀φ₀ᵀ.
class WaveKernel {
public:
  WaveKernel(const WeightedGraph& g, BoundaryPartition part)
      : graph_(&g), partition_(std::move(part)),
        engine_(dirichlet_spectrum(g, partition_)) {}

  const BoundaryPartition& partition() const { return partition_; }
  const Spectrum& spectrum() const { return engine_.spectrum; }
  const std::vector<int>& vertices() const { return engine_.vertices; }

  Eigen::MatrixXd at(double t) const {
    if (t < 0.0) throw Error("negative_time", "wave kernel needs t >= 0");
    return assemble([&](double lambda) {
      return lambda == 0.0 ? t : std::sin(std::sqrt(lambda) * t) / std::sqrt(lambda);
    });
  }

  Eigen::MatrixXd dt_at(double t) const {
    if (t < 0.0) throw Error("negative_time", "wave kernel needs t >= 0");
    return assemble([&](double lambda) {
      return lambda == 0.0 ? 1.0 : std::cos(std::sqrt(lambda) * t);
    });
  }

  /// u(x,t) = ⟨W_S(x,·,t), g⟩_S + ⟨∂ₜW_S(x,·,t), f⟩_S
  ///        + ∫₀ᵗ ⟨W_S(x,·,t−τ), B_σ(·,τ)⟩_S dτ,
  /// with the velocity from the differentiated modal formula rather than any
  /// numerical differencing. Boundary rows: u = σ(·,t), u_t = 0.
  WaveState solve(const VertexSignal& f, const VertexSignal& g0,
                  const BoundarySignal& sigma, double t) const {
    detail::check_kernel_inputs(partition_, f, sigma, t);
    if (!g0.same_domain(partition_.interior))
      throw Error("signal_domain", "initial velocity must live on exactly the interior");

    const Eigen::VectorXd sqrt_d = engine_.degrees.cwiseSqrt();
    const Eigen::VectorXd ft =
        engine_.spectrum.eigenvectors.transpose() * (sqrt_d.asDiagonal() * f.values);
    const Eigen::VectorXd gt =
        engine_.spectrum.eigenvectors.transpose() * (sqrt_d.asDiagonal() * g0.values);

    const Eigen::Index s = engine_.size();
    Eigen::VectorXd pos(s), vel(s);
    for (Eigen::Index i = 0; i < s; ++i) {
      const double lambda = engine_.spectrum.eigenvalues[i];
      if (lambda == 0.0) {
        pos[i] = ft[i] + gt[i] * t;
        vel[i] = gt[i];
      } else {
        const double om = std::sqrt(lambda);
        pos[i] = ft[i] * std::cos(om * t) + gt[i] * std::sin(om * t) / om;
        vel[i] = gt[i] * std::cos(om * t) - ft[i] * om * std::sin(om * t);
      }
    }
    detail::accumulate_forcing(*graph_, engine_, sigma, t, pos,
                               [&](double lambda, double ta, double tb) {
                                 return detail::wave_mode_integral(lambda, t, ta, tb);
                               });
    detail::accumulate_forcing(*graph_, engine_, sigma, t, vel,
                               [&](double lambda, double ta, double tb) {
                                 return detail::wave_mode_integral_dt(lambda, t, ta, tb);
                               });

    const Eigen::VectorXd inv_sqrt_d = sqrt_d.cwiseInverse();
    WaveState state;
    state.time = t;
    state.position = detail::assemble_closure(
        partition_, inv_sqrt_d.asDiagonal() * (engine_.spectrum.eigenvectors * pos),
        sigma, t);
    // σ is piecewise constant, so the prescribed boundary values carry zero
    // velocity within each interval.
    state.velocity = detail::assemble_closure(
        partition_, inv_sqrt_d.asDiagonal() * (engine_.spectrum.eigenvectors * vel),
        sigma, t, /*boundary_scale=*/0.0);
    return state;
  }

private:
  template <class ModeCoeff>
  Eigen::MatrixXd assemble(ModeCoeff coeff) const {
    const Eigen::Index s = engine_.size();
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(s, s);
    for (Eigen::Index i = 0; i < s; ++i) {
      const auto& phi = engine_.spectrum.eigenvectors.col(i);
      sym += coeff(engine_.spectrum.eigenvalues[i]) * (phi * phi.transpose());
    }
    return detail::degree_skew(sym, engine_.degrees);
  }

  const WeightedGraph* graph_;
  BoundaryPartition partition_;
  DirichletSpectrum engine_;
};

inline Eigen::MatrixXd wave_kernel(const WeightedGraph& g,
                                   const BoundaryPartition& part, double t) {
  return WaveKernel(g, part).at(t);
}

inline Eigen::MatrixXd wave_kernel_dt(const WeightedGraph& g,
                                      const BoundaryPartition& part, double t) {
  return WaveKernel(g, part).dt_at(t);
}

/// Solves u_tt = −Δu with u(·,0) = f, u_t(·,0) = g0 on S and u = σ on δS.
inline WaveState solve_wave(const WeightedGraph& g, const BoundaryPartition& part,
                            const VertexSignal& f, const VertexSignal& g0,
                            const BoundarySignal& sigma, double t) {
  return WaveKernel(g, part).solve(f, g0, sigma, t);
}

/// [D_v f](u) = (f(v) − f(u))·√(w_(u,v)/d_u) for an edge (u,v).
inline double directional_derivative(const WeightedGraph& g, const VertexSignal& f,
                                     int u, int v) {
  const Neighbor& nb = g.neighbor_edge(u, v);
  return (f.at(v) - f.at(u)) * std::sqrt(nb.weight / g.degree(u));
}

/// Collects D_v f(u) over the neighbors v of u in vertex order.
inline Eigen::VectorXd gradient(const WeightedGraph& g, const VertexSignal& f, int u) {
  const auto& nbrs = g.neighbors(u);
  Eigen::VectorXd out(static_cast<Eigen::Index>(nbrs.size()));
  for (size_t i = 0; i < nbrs.size(); ++i)
    out[static_cast<Eigen::Index>(i)] =
        (f.at(nbrs[i].vertex) - f.at(u)) * std::sqrt(nbrs[i].weight / g.degree(u));
  return out;
}

/// E(t) = Σ_{x∈S̄} [u_t(x)² + ½ Σ_{(x,y)∈E, y∈S̄} (D_y u(x))²]·d_x, with each
/// edge counted from both endpoints as in the defining double sum. Constant
/// in t for solutions with zero boundary values.
inline double energy(const WeightedGraph& g, const BoundaryPartition& part,
                     const WaveState& state) {
  if (!state.position.same_domain(part.closure) ||
      !state.velocity.same_domain(part.closure))
    throw Error("signal_domain", "wave state must live on the closure");
  double total = 0.0;
  for (size_t i = 0; i < part.closure.size(); ++i) {
    const int x = part.closure[i];
    const double ut = state.velocity.values[static_cast<Eigen::Index>(i)];
    double grad_sq = 0.0;
    for (const auto& nb : g.neighbors(x)) {
      int pos = state.position.find(nb.vertex);
      if (pos < 0) continue;  // edge leaves the closure
      const double diff = state.position.values[pos] -
                          state.position.values[static_cast<Eigen::Index>(i)];
      grad_sq += diff * diff * nb.weight / g.degree(x);
    }
    total += (ut * ut + 0.5 * grad_sq) * g.degree(x);
  }
  return total;
}

}  // namespace graphpde
