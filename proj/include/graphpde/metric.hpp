#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "graphpde/laplacian.hpp"
#include "graphpde/spectral.hpp"

namespace graphpde {

/// One family member of the edge-based spectrum of the geometric realization:
/// eigenvalue λ = ω² with its multiplicity. `window` is the 2π window the
/// frequency falls in; `certified_residual` is the worst vertex-condition
/// residual of a matching trace relative to ‖trace‖∞ (NaN for excluded
/// entries, which the vertex condition cannot certify).
struct MetricEntry {
  double omega = 0.0;
  int multiplicity = 0;
  int window = 0;
  double certified_residual = std::numeric_limits<double>::quiet_NaN();

  double lambda() const { return omega * omega; }
};

/// Edge-based eigenvalues, split into certified frequencies (ω > 0 with
/// ω·l_e ∉ πℤ for every edge) and the excluded set the closed form scopes
/// out (poles of the vertex condition, and ω = 0).
struct MetricSpectrum {
  enum class Source { ClosedFormUnit, SecularScan };
  Source source = Source::ClosedFormUnit;
  std::vector<MetricEntry> frequencies;  ///< ascending ω
  std::vector<MetricEntry> excluded;     ///< ascending ω
  std::vector<std::string> diagnostics;

  /// Number of edge-based eigenvalues with 0 < ω ≤ omega_max, counting
  /// multiplicity across both lists (the excluded families are genuine
  /// eigenvalues, just outside the vertex-condition certificate).
  int count_up_to(double omega_max) const {
    int n = 0;
    for (const auto& e : frequencies)
      if (e.omega <= omega_max) n += e.multiplicity;
    for (const auto& e : excluded)
      if (e.omega > 0.0 && e.omega <= omega_max) n += e.multiplicity;
    return n;
  }
};

namespace detail {

inline constexpr double kPoleTolerance = 1e-6;       ///< scan guard band (in ω·l)
inline constexpr double kPolePrecondition = 1e-8;    ///< hard pole rejection

/// Distance of x to the nearest integer multiple of π.
inline double distance_to_pi_grid(double x) {
  const double pi = std::numbers::pi;
  const double m = std::round(x / pi);
  return std::abs(x - m * pi);
}

inline bool clear_of_poles(const WeightedGraph& g, double omega, double guard) {
  for (const auto& e : g.edges())
    if (distance_to_pi_grid(omega * e.length) <= guard) return false;
  return true;
}

inline void require_clear(const WeightedGraph& g, double omega) {
  for (const auto& e : g.edges())
    if (distance_to_pi_grid(omega * e.length) <= kPolePrecondition)
      throw Error("pole", "omega*l is a multiple of pi on edge '" +
                              g.id_of(e.u) + "'-'" + g.id_of(e.v) +
                              "' (omega = " + format_double(omega) + ")");
}

}  // namespace detail

/// Per-vertex value of the matching condition
///   r(u) = Σ_{e=(u,v)∈E} [f(v) − cos(ω l_e) f(u)] / sin(ω l_e),
/// which vanishes at every vertex exactly when ω² is an edge-based eigenvalue
/// with vertex trace f. Requires ω·l_e ∉ πℤ on every edge.
inline Eigen::VectorXd vertex_condition_residual(const WeightedGraph& g, double omega,
                                                 const VertexSignal& trace) {
  detail::require_clear(g, omega);
  const int n = g.vertex_count();
  if (static_cast<int>(trace.domain.size()) != n)
    throw Error("signal_domain", "trace must be defined on every vertex");
  Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
  for (int u = 0; u < n; ++u) {
    double sum = 0.0;
    for (const auto& nb : g.neighbors(u))
      sum += (trace.at(nb.vertex) - std::cos(omega * nb.length) * trace.at(u)) /
             std::sin(omega * nb.length);
    r[u] = sum;
  }
  return r;
}

/// Symmetric matrix form of the vertex condition: M(ω)f collects r(u) above.
/// M(ω)_{uv} = 1/sin(ω l_e) on edges, M(ω)_{uu} = −Σ_e cos(ω l_e)/sin(ω l_e).
inline Eigen::MatrixXd secular_matrix(const WeightedGraph& g, double omega) {
  detail::require_clear(g, omega);
  const int n = g.vertex_count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    const double s = std::sin(omega * e.length);
    m(e.u, e.v) += 1.0 / s;
    m(e.v, e.u) += 1.0 / s;
    const double c = std::cos(omega * e.length) / s;
    m(e.u, e.u) -= c;
    m(e.v, e.v) -= c;
  }
  return m;
}

namespace detail {

struct Candidate {
  double omega;
  int mult;
  int cluster;  ///< index into the Ã eigen-clusters, or -1 for the π-family
};

/// Worst relative vertex-condition residual over the given traces at ω.
inline double certify_traces(const WeightedGraph& g, double omega,
                             const std::vector<Eigen::VectorXd>& traces) {
  double worst = 0.0;
  std::vector<int> domain(static_cast<size_t>(g.vertex_count()));
  for (int i = 0; i < g.vertex_count(); ++i) domain[static_cast<size_t>(i)] = i;
  for (const auto& t : traces) {
    VertexSignal f;
    f.domain = domain;
    f.values = t;
    const double scale = t.cwiseAbs().maxCoeff();
    const double res = vertex_condition_residual(g, omega, f).cwiseAbs().maxCoeff();
    worst = std::max(worst, scale == 0.0 ? res : res / scale);
  }
  return worst;
}

}  // namespace detail

/// Closed-form edge-based spectrum for the unit-weight, unit-length regime:
/// for every eigenvalue λ of Ã, ω = arccos(λ)+2πk and ω = 2π−arccos(λ)+2πk
/// (0 ≤ k < k_max) with Ã's multiplicities, plus the family ω = π+πk with
/// multiplicity |E|−|V| (a negative value subtracts from coinciding arccos
/// entries; results clamped at zero with a diagnostic). Frequencies at
/// multiples of π — where sin(ω l_e) vanishes — and ω = 0 land in `excluded`.
/// Enumerates ω ∈ (0, 2π·k_max).
inline MetricSpectrum unit_length_spectrum(const WeightedGraph& g, int k_max) {
  if (k_max < 1) throw Error("bad_argument", "k_max must be at least 1");
  if (!g.unit_lengths())
    throw Error("nonuniform_lengths",
                "the closed form needs every edge length equal to 1");
  if (!g.unit_weights())
    throw Error("nonuniform_weights",
                "the closed form needs every edge weight equal to 1");
  const double two_pi = 2.0 * std::numbers::pi;
  const double omega_end = two_pi * k_max;

  // Ã shares eigenvalues with its symmetric conjugate I − 𝓛; eigenvectors of
  // Ã are T^(−1/2) times the symmetric ones and come out T-normalized.
  const int n = g.vertex_count();
  Eigen::MatrixXd sym =
      Eigen::MatrixXd::Identity(n, n) - normalized_laplacian(g).entries;
  Spectrum spec = eigendecompose_symmetric(sym);
  auto clusters = cluster_eigenvalues(spec);

  std::vector<std::vector<Eigen::VectorXd>> cluster_traces(clusters.size());
  for (size_t c = 0; c < clusters.size(); ++c)
    for (Eigen::Index j : clusters[c].second) {
      Eigen::VectorXd t = spec.eigenvectors.col(j);
      for (int v = 0; v < n; ++v) t[v] /= std::sqrt(g.degree(v));
      cluster_traces[c].push_back(std::move(t));
    }

  std::vector<detail::Candidate> cands;
  for (size_t c = 0; c < clusters.size(); ++c) {
    // Snap to ±1 at the clustering resolution: arccos would otherwise blow a
    // last-ulp eigenvalue error up into a spurious near-pole frequency.
    double lambda = std::clamp(clusters[c].first, -1.0, 1.0);
    if (std::abs(lambda - 1.0) <= 1e-10) lambda = 1.0;
    if (std::abs(lambda + 1.0) <= 1e-10) lambda = -1.0;
    const double theta = std::acos(lambda);
    const int mult = static_cast<int>(clusters[c].second.size());
    for (int k = 0; k < k_max; ++k) {
      cands.push_back({theta + two_pi * k, mult, static_cast<int>(c)});
      cands.push_back({(two_pi - theta) + two_pi * k, mult, static_cast<int>(c)});
    }
  }
  const int pi_mult = g.edge_count() - g.vertex_count();
  if (pi_mult != 0)
    for (int m = 1; m < 2 * k_max; ++m)
      cands.push_back({std::numbers::pi * m, pi_mult, -1});

  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
    if (a.omega != b.omega) return a.omega < b.omega;
    return a.cluster < b.cluster;
  });

  MetricSpectrum out;
  out.source = MetricSpectrum::Source::ClosedFormUnit;
  size_t i = 0;
  while (i < cands.size()) {
    size_t j = i + 1;
    double omega = cands[i].omega;
    int mult = cands[i].mult;
    std::set<int> members{cands[i].cluster};
    while (j < cands.size() && cands[j].omega - omega <= 1e-9) {
      mult += cands[j].mult;
      members.insert(cands[j].cluster);
      ++j;
    }
    i = j;
    if (omega >= omega_end - 1e-9) continue;  // incomplete top-window merge
    if (mult < 0) {
      out.diagnostics.push_back("multiplicity " + std::to_string(mult) +
                                " at omega = " + format_double(omega) +
                                " clamped to 0");
      mult = 0;
    }
    MetricEntry entry;
    entry.omega = omega;
    entry.multiplicity = mult;
    entry.window = static_cast<int>(std::floor(omega / two_pi));
    const bool pole =
        omega <= 1e-12 || detail::distance_to_pi_grid(omega) <= detail::kPolePrecondition;
    if (pole) {
      out.excluded.push_back(entry);
      continue;
    }
    double worst = 0.0;
    for (int c : members)
      if (c >= 0)
        worst = std::max(worst,
                         detail::certify_traces(g, omega, cluster_traces[static_cast<size_t>(c)]));
    entry.certified_residual = worst;
    out.frequencies.push_back(entry);
  }
  return out;
}

/// Locates edge-based eigenvalues for arbitrary lengths: scans [omega_lo,
/// omega_hi] on a grid for sign changes of the smallest-magnitude eigenvalue
/// μ(ω) of the secular matrix, refines each bracket by bisection to an
/// interval below 1e−10, and keeps only roots whose null vector certifies
/// under the vertex condition (residual ≤ 1e−7·‖trace‖∞). Grid points within
/// a guard band of 1e−6 (in ω·l_e) of a pole are excised, and brackets
/// containing a pole are discarded; roots hiding inside guard bands are lost,
/// so an empty result is valid.
inline MetricSpectrum find_metric_eigenvalues(const WeightedGraph& g, double omega_lo,
                                              double omega_hi, double grid_step) {
  if (!(omega_lo > 0.0) || !(omega_hi > omega_lo))
    throw Error("bad_argument", "need 0 < omega_lo < omega_hi");
  if (!(grid_step > 0.0)) throw Error("bad_argument", "grid_step must be positive");
  const double two_pi = 2.0 * std::numbers::pi;

  MetricSpectrum out;
  out.source = MetricSpectrum::Source::SecularScan;

  // Pole positions kπ/l over all edge lengths, for bracket hygiene and the
  // excluded list.
  std::vector<double> poles;
  {
    std::set<double> lengths;
    for (const auto& e : g.edges()) lengths.insert(e.length);
    for (double l : lengths) {
      const long k_lo = std::max(1L, static_cast<long>(std::floor(omega_lo * l / std::numbers::pi)));
      const long k_hi = static_cast<long>(std::ceil(omega_hi * l / std::numbers::pi)) + 1;
      for (long k = k_lo; k <= k_hi; ++k) poles.push_back(k * std::numbers::pi / l);
    }
    std::sort(poles.begin(), poles.end());
    for (double p : poles)
      if (p > omega_lo && p < omega_hi &&
          (out.excluded.empty() || p - out.excluded.back().omega > 1e-9)) {
        MetricEntry entry;
        entry.omega = p;
        entry.window = static_cast<int>(std::floor(p / two_pi));
        out.excluded.push_back(entry);
      }
  }
  auto pole_between = [&](double a, double b) {
    auto it = std::upper_bound(poles.begin(), poles.end(), a);
    return it != poles.end() && *it < b;
  };

  auto mu_min = [&](double omega) {
    Spectrum s = eigendecompose_symmetric(secular_matrix(g, omega));
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < s.size(); ++i)
      if (std::abs(s.eigenvalues[i]) < std::abs(s.eigenvalues[best])) best = i;
    return s.eigenvalues[best];
  };

  // Clear grid points.
  std::vector<double> grid;
  for (double w = omega_lo; w < omega_hi; w += grid_step)
    if (detail::clear_of_poles(g, w, detail::kPoleTolerance)) grid.push_back(w);
  if (detail::clear_of_poles(g, omega_hi, detail::kPoleTolerance))
    grid.push_back(omega_hi);

  std::vector<double> roots;
  double prev_omega = 0.0, prev_mu = 0.0;
  bool have_prev = false;
  for (double w : grid) {
    const double mu = mu_min(w);
    if (have_prev && !pole_between(prev_omega, w) &&
        ((prev_mu < 0.0 && mu > 0.0) || (prev_mu > 0.0 && mu < 0.0))) {
      double a = prev_omega, b = w, fa = prev_mu;
      int iterations = 0;
      while (b - a >= 1e-10 && iterations < 200) {
        const double mid = 0.5 * (a + b);
        const double fm = mu_min(mid);
        if ((fa < 0.0) == (fm < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
        ++iterations;
      }
      if (b - a >= 1e-10)
        out.diagnostics.push_back("bisection did not converge in [" +
                                  format_double(prev_omega) + ", " +
                                  format_double(w) + "]");
      else
        roots.push_back(0.5 * (a + b));
    } else if (mu == 0.0) {
      roots.push_back(w);
    }
    prev_omega = w;
    prev_mu = mu;
    have_prev = true;
  }

  std::vector<int> domain(static_cast<size_t>(g.vertex_count()));
  for (int i = 0; i < g.vertex_count(); ++i) domain[static_cast<size_t>(i)] = i;
  double last_kept = -1.0;
  for (double root : roots) {
    if (last_kept >= 0.0 && root - last_kept <= 1e-9) continue;  // same root twice
    Spectrum s = eigendecompose_symmetric(secular_matrix(g, root));
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < s.size(); ++i)
      if (std::abs(s.eigenvalues[i]) < std::abs(s.eigenvalues[best])) best = i;

    // T-normalize the trace; the symmetric eigenvector is unit in the plain
    // inner product instead.
    Eigen::VectorXd trace = s.eigenvectors.col(best);
    double tnorm = 0.0;
    for (int v = 0; v < g.vertex_count(); ++v)
      tnorm += trace[v] * trace[v] * g.degree(v);
    trace /= std::sqrt(tnorm);

    VertexSignal f;
    f.domain = domain;
    f.values = trace;
    const double residual = vertex_condition_residual(g, root, f).cwiseAbs().maxCoeff();
    const double rel = residual / trace.cwiseAbs().maxCoeff();
    if (rel > 1e-7) {
      out.diagnostics.push_back("candidate at omega = " + format_double(root) +
                                " rejected: residual " + format_double(rel));
      continue;
    }

    const double scale = std::max(1.0, s.eigenvalues.cwiseAbs().maxCoeff());
    const double threshold =
        std::max(1e-7 * scale, 1e3 * std::abs(s.eigenvalues[best]));
    int mult = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (std::abs(s.eigenvalues[i]) <= threshold) ++mult;

    MetricEntry entry;
    entry.omega = root;
    entry.multiplicity = mult;
    entry.window = static_cast<int>(std::floor(root / two_pi));
    entry.certified_residual = rel;
    out.frequencies.push_back(entry);
    last_kept = root;
  }
  return out;
}

/// One edge of an edge-based eigenfunction: f|_e(x) = A·cos(ωx + B) for
/// x ∈ [0, l], oriented from `u` to `v` as the edge was declared.
struct CosineEdge {
  int u = -1;
  int v = -1;
  double amplitude = 0.0;  ///< A ≥ 0
  double phase = 0.0;      ///< B ∈ [0, 2π)
  double length = 1.0;
};

struct EdgeEigenfunction {
  double omega = 0.0;
  std::vector<CosineEdge> edges;  ///< aligned with the graph's edge list
  VertexSignal trace;

  double value_on_edge(size_t edge, double x) const {
    const auto& e = edges[edge];
    return e.amplitude * std::cos(omega * x + e.phase);
  }
};

/// Fills in the cosine profile on every edge from the vertex trace: solves
/// A cos B = f(u), A cos(ω l + B) = f(v) with A ≥ 0, B ∈ [0, 2π). Endpoint
/// disagreement beyond 1e−9·max(1, ‖trace‖∞) means ω is not an eigenvalue
/// for this trace.
inline EdgeEigenfunction reconstruct_eigenfunction(const WeightedGraph& g,
                                                   double omega,
                                                   const VertexSignal& trace) {
  detail::require_clear(g, omega);
  if (static_cast<int>(trace.domain.size()) != g.vertex_count())
    throw Error("signal_domain", "trace must be defined on every vertex");
  const double tol =
      1e-9 * std::max(1.0, trace.values.size() == 0 ? 0.0 : trace.values.cwiseAbs().maxCoeff());

  EdgeEigenfunction out;
  out.omega = omega;
  out.trace = trace;
  for (const auto& e : g.edges()) {
    const double fu = trace.at(e.u), fv = trace.at(e.v);
    const double sin_wl = std::sin(omega * e.length);
    const double cos_wl = std::cos(omega * e.length);
    const double s = (fu * cos_wl - fv) / sin_wl;  // A sin B
    CosineEdge ce;
    ce.u = e.u;
    ce.v = e.v;
    ce.length = e.length;
    ce.amplitude = std::hypot(fu, s);
    if (ce.amplitude > 0.0) {
      ce.phase = std::atan2(s, fu);
      if (ce.phase < 0.0) ce.phase += 2.0 * std::numbers::pi;
    }
    const double end_u = ce.amplitude * std::cos(ce.phase) - fu;
    const double end_v = ce.amplitude * std::cos(omega * e.length + ce.phase) - fv;
    if (std::abs(end_u) > tol || std::abs(end_v) > tol)
      throw Error("endpoint_mismatch",
                  "edge '" + g.id_of(e.u) + "'-'" + g.id_of(e.v) +
                      "' cannot carry a cosine with the given endpoints at omega = " +
                      format_double(omega));
    out.edges.push_back(ce);
  }
  return out;
}

}  // namespace graphpde
