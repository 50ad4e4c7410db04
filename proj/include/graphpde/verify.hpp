#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/LU>

#include "graphpde/elliptic.hpp"
#include "graphpde/greens.hpp"
#include "graphpde/heat.hpp"
#include "graphpde/io.hpp"
#include "graphpde/metric.hpp"
#include "graphpde/random.hpp"
#include "graphpde/wave.hpp"

namespace graphpde {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool skipped = false;
  std::string note;
};

namespace detail {

inline Eigen::MatrixXd lu_inverse(const Eigen::MatrixXd& m) {
  return Eigen::PartialPivLU<Eigen::MatrixXd>(m).inverse();
}

inline Eigen::VectorXd lu_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& b) {
  return Eigen::PartialPivLU<Eigen::MatrixXd>(m).solve(b);
}

/// Orthogonal projector onto the span of the given columns.
inline Eigen::MatrixXd projector_onto(const Eigen::MatrixXd& basis) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(basis.rows(), basis.cols());
  return q * q.transpose();
}

}  // namespace detail

/// Runs the whole invariant suite on one graph. Checks whose preconditions
/// the graph cannot meet (connectivity, unit lengths, runtime caps) come back
/// skipped with a note. Tolerances scale with `tol_scale`.
inline std::vector<CheckResult> run_verification(const WeightedGraph& g,
                                                 double tol_scale = 1.0) {
  std::vector<CheckResult> results;
  auto add = [&](const std::string& name, double tolerance,
                 const std::function<double()>& measure) {
    CheckResult r;
    r.name = name;
    r.tolerance = tolerance * tol_scale;
    try {
      r.measured = measure();
      r.passed = r.measured <= r.tolerance;
    } catch (const Error& e) {
      r.passed = false;
      r.measured = std::numeric_limits<double>::quiet_NaN();
      r.note = std::string(e.code()) + ": " + e.what();
    }
    results.push_back(std::move(r));
  };
  auto skip = [&](const std::string& name, const std::string& why) {
    CheckResult r;
    r.name = name;
    r.skipped = true;
    r.passed = true;
    r.note = why;
    results.push_back(std::move(r));
  };

  const int n = g.vertex_count();
  const bool connected = g.connected();

  // Deterministic interior: drop the trailing fifth of each connected
  // component, so every interior component keeps a boundary edge.
  std::vector<int> interior_ids;
  for (const auto& comp : g.connected_components()) {
    const size_t keep = comp.size() - std::max<size_t>(1, comp.size() / 5);
    for (size_t i = 0; i < keep; ++i) interior_ids.push_back(comp[i]);
  }
  std::sort(interior_ids.begin(), interior_ids.end());
  BoundaryPartition part = boundary_of(g, std::span<const int>(interior_ids));
  const bool dirichlet_ok = part.every_component_touches_boundary;
  const std::string no_partition =
      "the verification partition has an interior component with no boundary edge";

  SplitMix64 rng(0x5eed5eedULL);

  // --- graph ---------------------------------------------------------------
  add("graph: S, dS, V\\(S u dS) partition V; boundary_of idempotent", 0.0, [&] {
    std::vector<char> tag(static_cast<size_t>(n), 0);
    int violations = 0;
    for (int v : part.interior) tag[static_cast<size_t>(v)] += 1;
    for (int v : part.boundary) tag[static_cast<size_t>(v)] += 1;
    for (int v : part.closure)
      if (!tag[static_cast<size_t>(v)]) ++violations;  // closure must be S u dS
    BoundaryPartition again = boundary_of(g, std::span<const int>(part.interior));
    if (again.interior != part.interior || again.boundary != part.boundary ||
        again.closure != part.closure)
      ++violations;
    for (size_t v = 0; v < tag.size(); ++v)
      if (tag[v] > 1) ++violations;  // S and dS overlap
    return static_cast<double>(violations);
  });

  add("graph: parse(serialize(g)) == g, weights bit-equal", 0.0, [&] {
    int mismatches = 0;
    for (const std::string& text :
         {serialize_graph_tsv(g), serialize_graph_json(g)}) {
      WeightedGraph h = parse_graph(text);
      if (h.vertex_ids() != g.vertex_ids()) ++mismatches;
      if (h.edge_count() != g.edge_count()) {
        ++mismatches;
        continue;
      }
      for (int e = 0; e < g.edge_count(); ++e) {
        const Edge &a = g.edges()[static_cast<size_t>(e)], &b = h.edges()[static_cast<size_t>(e)];
        if (a.u != b.u || a.v != b.v || a.weight != b.weight || a.length != b.length)
          ++mismatches;
      }
    }
    return static_cast<double>(mismatches);
  });

  // --- laplacian -------------------------------------------------------------
  const OperatorMatrix L = combinatorial_laplacian(g);
  const OperatorMatrix D = discrete_laplacian(g);
  const OperatorMatrix N = normalized_laplacian(g);
  const OperatorMatrix A = normalized_adjacency(g);

  add("laplacian: x'Lx = sum_e w (x_u - x_v)^2 >= 0", 1e-10, [&] {
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      Eigen::VectorXd x = rng.uniform_vector(n, -1.0, 1.0);
      const double quad = x.dot(L.entries * x);
      double direct = 0.0;
      for (const auto& e : g.edges()) {
        const double d = x[e.u] - x[e.v];
        direct += e.weight * d * d;
      }
      worst = std::max(worst, std::abs(quad - direct) / std::max(1.0, std::abs(direct)));
      worst = std::max(worst, -quad);
    }
    return worst;
  });

  add("laplacian: normalized = T^-1/2 L T^-1/2 and Delta = T^-1 L", 1e-12, [&] {
    double worst = 0.0;
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        const double norm_uv = L.entries(u, v) / std::sqrt(g.degree(u) * g.degree(v));
        const double disc_uv = L.entries(u, v) / g.degree(u);
        worst = std::max(worst, std::abs(N.entries(u, v) - norm_uv) /
                                    std::max(1.0, std::abs(norm_uv)));
        worst = std::max(worst, std::abs(D.entries(u, v) - disc_uv) /
                                    std::max(1.0, std::abs(disc_uv)));
      }
    return worst;
  });

  const Spectrum norm_spec = eigendecompose_symmetric(N.entries);

  add("laplacian: Delta and normalized share spectra via T^-1/2", 1e-9, [&] {
    double worst = 0.0;
    const Eigen::VectorXd inv_sqrt_d = g.degrees().cwiseSqrt().cwiseInverse();
    for (Eigen::Index i = 0; i < norm_spec.size(); ++i) {
      const double lambda = norm_spec.eigenvalues[i];
      const Eigen::VectorXd phi = norm_spec.eigenvectors.col(i);
      const Eigen::VectorXd psi = inv_sqrt_d.asDiagonal() * phi;
      worst = std::max(worst, (D.entries * psi - lambda * psi).cwiseAbs().maxCoeff());
      worst = std::max(worst, (N.entries * phi - lambda * phi).cwiseAbs().maxCoeff());
    }
    return worst / std::max(1.0, detail::max_abs(N.entries));
  });

  add("laplacian: normalized spectrum in [0,2], null dim = #components", 1e-9, [&] {
    double worst = 0.0;
    worst = std::max(worst, -norm_spec.eigenvalues[0]);
    worst = std::max(worst, norm_spec.eigenvalues[norm_spec.size() - 1] - 2.0);
    const double cutoff = null_space_cutoff(norm_spec.eigenvalues);
    Eigen::Index zeros = 0;
    while (zeros < norm_spec.size() && norm_spec.eigenvalues[zeros] <= cutoff) ++zeros;
    if (zeros != static_cast<Eigen::Index>(g.connected_components().size())) worst += 1.0;
    return worst;
  });

  add("laplacian: Delta = I - A~ entrywise", 0.0, [&] {
    return detail::max_abs(D.entries -
                           (Eigen::MatrixXd::Identity(n, n) - A.entries));
  });

  // --- spectral --------------------------------------------------------------
  const Eigen::MatrixXd random_sym = rng.symmetric_matrix(std::min(n + 4, 16), -2.0, 2.0);
  const Spectrum random_spec = eigendecompose_symmetric(random_sym);

  add("spectral: eigenpair residual", 1e-9, [&] {
    double worst = 0.0;
    for (auto [mat, spec] : {std::pair<const Eigen::MatrixXd*, const Spectrum*>{
                                 &N.entries, &norm_spec},
                             {&random_sym, &random_spec}}) {
      for (Eigen::Index i = 0; i < spec->size(); ++i) {
        const Eigen::VectorXd r = (*mat) * spec->eigenvectors.col(i) -
                                  spec->eigenvalues[i] * spec->eigenvectors.col(i);
        worst = std::max(worst, r.cwiseAbs().maxCoeff() /
                                    std::max(1.0, detail::max_abs(*mat)));
      }
    }
    return worst;
  });

  add("spectral: eigenvector orthonormality", 1e-10, [&] {
    double worst = 0.0;
    for (const Spectrum* spec : {&norm_spec, &random_spec}) {
      Eigen::MatrixXd gram = spec->eigenvectors.transpose() * spec->eigenvectors;
      worst = std::max(worst, detail::max_abs(gram - Eigen::MatrixXd::Identity(
                                                         gram.rows(), gram.cols())));
    }
    return worst;
  });

  add("spectral: rank-one reconstruction", 1e-8, [&] {
    double worst = 0.0;
    for (auto [mat, spec] : {std::pair<const Eigen::MatrixXd*, const Spectrum*>{
                                 &N.entries, &norm_spec},
                             {&random_sym, &random_spec}}) {
      Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(mat->rows(), mat->cols());
      for (Eigen::Index i = 0; i < spec->size(); ++i)
        rebuilt += spec->eigenvalues[i] * spec->eigenvectors.col(i) *
                   spec->eigenvectors.col(i).transpose();
      worst = std::max(worst, detail::max_abs(rebuilt - *mat) / detail::max_abs(*mat));
    }
    return worst;
  });

  add("spectral: identical input bits give identical spectra", 0.0, [&] {
    const Spectrum again = eigendecompose_symmetric(N.entries);
    double diff = detail::max_abs(again.eigenvectors - norm_spec.eigenvectors);
    diff = std::max(diff, (again.eigenvalues - norm_spec.eigenvalues).cwiseAbs().maxCoeff());
    return diff;
  });

  if (!dirichlet_ok) {
    for (const char* name :
         {"spectral: Rayleigh quotient bounded below by lambda_1",
          "greens: inverse of the Dirichlet operators",
          "greens: symmetric", "greens: matches the elimination inverse",
          "greens: heat-kernel time integral",
          "greens: unnormalized agrees with L_S^-1 T_S",
          "elliptic: harmonic solve matches elimination",
          "elliptic: Laplace residual and boundary values",
          "elliptic: Poisson residual", "elliptic: linearity",
          "elliptic: maximum principle for harmonic functions",
          "elliptic: eigenbasis coefficients a_i/lambda_i",
          "heat: kernel at t=0 is the identity",
          "heat: kernel solves dK/dt = -Delta K",
          "heat: solution PDE residual", "heat: weak maximum principle",
          "heat: semigroup property", "heat: long-time limit is harmonic",
          "wave: kernel value and velocity at t=0",
          "wave: kernel curvature = -Delta W", "wave: energy constant in time",
          "wave: initial conditions reproduced", "wave: solution PDE residual",
          "wave: repeated solve bitwise identical", "wave: linearity",
          "wave: position even in time for velocity-free data"})
      skip(name, no_partition);
  } else {
    const Eigen::Index s = static_cast<Eigen::Index>(part.interior.size());
    const OperatorMatrix Ns = restrict_to(N, part);
    const OperatorMatrix Ds = restrict_to(D, part);
    const OperatorMatrix Ls = restrict_to(L, part);
    const Eigen::VectorXd ds = interior_degrees(g, part.interior);
    const GreensFunction gf = greens_dirichlet(g, part);
    const double lambda1 = gf.spectrum.eigenvalues[0];

    add("spectral: Rayleigh quotient bounded below by lambda_1", 1e-9, [&] {
      double worst = 0.0;
      double min_q = std::numeric_limits<double>::infinity();
      for (int rep = 0; rep < 200; ++rep) {
        VertexSignal f = VertexSignal::zeros(part.closure);
        for (int v : part.interior) f.values[f.find(v)] = rng.uniform(-1.0, 1.0);
        min_q = std::min(min_q, rayleigh_quotient(g, part, f));
      }
      worst = std::max(worst, lambda1 - min_q);
      // The lifted first eigenvector attains the bound.
      VertexSignal minimizer = VertexSignal::zeros(part.closure);
      for (Eigen::Index i = 0; i < s; ++i)
        minimizer.values[minimizer.find(part.interior[static_cast<size_t>(i)])] =
            gf.spectrum.eigenvectors(i, 0) / std::sqrt(ds[i]);
      worst = std::max(worst, std::abs(rayleigh_quotient(g, part, minimizer) - lambda1));
      return worst;
    });

    add("greens: inverse of the Dirichlet operators", 1e-8, [&] {
      const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(s, s);
      double worst = detail::max_abs(gf.normalized * Ns.entries - eye);
      worst = std::max(worst, detail::max_abs(gf.unnormalized * Ds.entries - eye));
      return worst;
    });

    add("greens: symmetric", 0.0, [&] {
      return detail::max_abs(gf.normalized - gf.normalized.transpose());
    });

    add("greens: matches the elimination inverse", 1e-8, [&] {
      return detail::max_abs(gf.normalized - detail::lu_inverse(Ns.entries));
    });

    // The modal error bound e^(-lambda_1 T)/lambda_1 is attained exactly when
    // the Dirichlet spectrum is flat, so allow for assembly rounding on top.
    add("greens: heat-kernel time integral",
        (std::exp(-30.0) + 8.0 * s * std::numeric_limits<double>::epsilon()) / lambda1,
        [&] {
      const double T = 30.0 / lambda1;
      Eigen::MatrixXd integral = Eigen::MatrixXd::Zero(s, s);
      for (Eigen::Index i = 0; i < s; ++i) {
        const double lambda = gf.spectrum.eigenvalues[i];
        integral += (-std::expm1(-lambda * T) / lambda) *
                    (gf.spectrum.eigenvectors.col(i) *
                     gf.spectrum.eigenvectors.col(i).transpose());
      }
      return detail::max_abs(integral - gf.normalized);
    });

    add("greens: unnormalized agrees with L_S^-1 T_S", 1e-8, [&] {
      const Eigen::MatrixXd oracle = detail::lu_inverse(Ls.entries) * ds.asDiagonal();
      return detail::max_abs(gf.unnormalized - oracle);
    });

    // --- elliptic ------------------------------------------------------------
    auto random_sigma = [&] {
      VertexSignal sigma = VertexSignal::zeros(part.boundary);
      for (Eigen::Index i = 0; i < sigma.values.size(); ++i)
        sigma.values[i] = rng.uniform(-1.0, 1.0);
      return sigma;
    };
    auto random_source = [&] {
      VertexSignal src = VertexSignal::zeros(part.interior);
      for (Eigen::Index i = 0; i < src.values.size(); ++i)
        src.values[i] = rng.uniform(-1.0, 1.0);
      return src;
    };

    add("elliptic: harmonic solve matches elimination", 1e-8, [&] {
      double worst = 0.0;
      for (int rep = 0; rep < 5; ++rep) {
        VertexSignal sigma = random_sigma();
        VertexSignal f = solve_laplace(DirichletProblem::laplace(g, part, sigma));
        Eigen::VectorXd rhs = detail::boundary_flux(g, part, sigma);
        for (Eigen::Index i = 0; i < rhs.size(); ++i) rhs[i] /= ds[i];
        const Eigen::VectorXd oracle = detail::lu_solve(Ds.entries, rhs);
        for (Eigen::Index i = 0; i < s; ++i)
          worst = std::max(worst, std::abs(f.at(part.interior[static_cast<size_t>(i)]) - oracle[i]));
      }
      return worst;
    });

    add("elliptic: Laplace residual and boundary values", 1e-8, [&] {
      VertexSignal sigma = random_sigma();
      VertexSignal f = solve_laplace(DirichletProblem::laplace(g, part, sigma));
      const double scale = std::max(1.0, sigma.values.cwiseAbs().maxCoeff());
      double worst = apply_discrete_laplacian(g, part, f).cwiseAbs().maxCoeff() / scale;
      for (size_t i = 0; i < part.boundary.size(); ++i)
        worst = std::max(worst, std::abs(f.at(part.boundary[i]) -
                                         sigma.values[static_cast<Eigen::Index>(i)]));
      return worst;
    });

    add("elliptic: Poisson residual", 1e-8, [&] {
      VertexSignal sigma = random_sigma();
      VertexSignal src = random_source();
      VertexSignal f = solve_poisson(DirichletProblem::poisson(g, part, sigma, src));
      const double scale = std::max({1.0, sigma.values.cwiseAbs().maxCoeff(),
                                     src.values.cwiseAbs().maxCoeff()});
      Eigen::VectorXd resid = apply_discrete_laplacian(g, part, f) - src.values;
      return resid.cwiseAbs().maxCoeff() / scale;
    });

    add("elliptic: linearity", 1e-9, [&] {
      VertexSignal s1 = random_sigma(), s2 = random_sigma();
      VertexSignal g1 = random_source(), g2 = random_source();
      const double a = 0.625, b = -1.375;
      VertexSignal combined_sigma = s1, combined_src = g1;
      combined_sigma.values = a * s1.values + b * s2.values;
      combined_src.values = a * g1.values + b * g2.values;
      VertexSignal lhs =
          solve_poisson(DirichletProblem::poisson(g, part, combined_sigma, combined_src));
      VertexSignal r1 = solve_poisson(DirichletProblem::poisson(g, part, s1, g1));
      VertexSignal r2 = solve_poisson(DirichletProblem::poisson(g, part, s2, g2));
      return (lhs.values - a * r1.values - b * r2.values).cwiseAbs().maxCoeff();
    });

    add("elliptic: maximum principle for harmonic functions", 1e-10, [&] {
      VertexSignal sigma = random_sigma();
      VertexSignal f = solve_laplace(DirichletProblem::laplace(g, part, sigma));
      const double lo = sigma.values.minCoeff(), hi = sigma.values.maxCoeff();
      double worst = 0.0;
      for (int v : part.interior) {
        worst = std::max(worst, f.at(v) - hi);
        worst = std::max(worst, lo - f.at(v));
      }
      return worst;
    });

    add("elliptic: eigenbasis coefficients a_i/lambda_i", 1e-9, [&] {
      VertexSignal zero_sigma = VertexSignal::zeros(part.boundary);
      VertexSignal src = random_source();
      VertexSignal f = solve_poisson(DirichletProblem::poisson(g, part, zero_sigma, src));
      // Expand T^(1/2) g in the basis, divide by lambda, compare to T^(1/2) f.
      Eigen::VectorXd coeffs = gf.spectrum.eigenvectors.transpose() *
                               (ds.cwiseSqrt().asDiagonal() * src.values);
      coeffs.array() /= gf.spectrum.eigenvalues.array();
      const Eigen::VectorXd expected = gf.spectrum.eigenvectors * coeffs;
      double worst = 0.0;
      for (Eigen::Index i = 0; i < s; ++i)
        worst = std::max(worst,
                         std::abs(std::sqrt(ds[i]) * f.at(part.interior[static_cast<size_t>(i)]) -
                                  expected[i]));
      return worst;
    });

    // --- heat ----------------------------------------------------------------
    const HeatKernel heat(g, part);

    add("heat: kernel at t=0 is the identity", 1e-10, [&] {
      return detail::max_abs(heat.at(0.0) - Eigen::MatrixXd::Identity(s, s));
    });

    add("heat: kernel solves dK/dt = -Delta K", 1e-4, [&] {
      const double h = 1e-6, t = 0.7;
      const Eigen::MatrixXd dK = (heat.at(t + h) - heat.at(t - h)) / (2.0 * h);
      return detail::max_abs(dK + Ds.entries * heat.at(t));
    });

    auto random_interior = [&](double lo, double hi) {
      VertexSignal f = VertexSignal::zeros(part.interior);
      for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values[i] = rng.uniform(lo, hi);
      return f;
    };

    add("heat: solution PDE residual", 1e-4, [&] {
      VertexSignal f0 = random_interior(-1.0, 1.0);
      BoundarySignal sigma = BoundarySignal::constant(part, 0.35, 4.0);
      const double h = 1e-5;
      double worst = 0.0;
      for (double t : {0.5, 1.5, 3.0}) {
        VertexSignal um = heat.solve(f0, sigma, t - h);
        VertexSignal u0 = heat.solve(f0, sigma, t);
        VertexSignal up = heat.solve(f0, sigma, t + h);
        const Eigen::VectorXd dudt = (up.values - um.values) / (2.0 * h);
        const Eigen::VectorXd lap = apply_discrete_laplacian(g, part, u0);
        for (size_t i = 0; i < part.interior.size(); ++i) {
          const Eigen::Index row =
              static_cast<Eigen::Index>(u0.find(part.interior[i]));
          worst = std::max(worst, std::abs(dudt[row] + lap[static_cast<Eigen::Index>(i)]));
        }
      }
      return worst;
    });

    add("heat: weak maximum principle", 1e-10, [&] {
      VertexSignal f0 = random_interior(0.0, 1.0);
      BoundarySignal sigma = BoundarySignal::constant(part, 0.25, 10.0);
      double min_u = 0.0;
      for (int k = 0; k <= 40; ++k) {
        VertexSignal u = heat.solve(f0, sigma, k * 0.25);
        min_u = std::min(min_u, u.values.minCoeff());
      }
      return -min_u;
    });

    add("heat: semigroup property", 1e-9, [&] {
      const double t1 = 0.6, t2 = 1.1;
      return detail::max_abs(heat.at(t1 + t2) - heat.at(t1) * heat.at(t2));
    });

    add("heat: long-time limit is harmonic", 1e-6, [&] {
      VertexSignal sigma_vals = random_sigma();
      VertexSignal f0 = random_interior(-1.0, 1.0);
      const double T = 40.0 / lambda1;
      BoundarySignal sigma = BoundarySignal::constant(part, 0.0, T);
      sigma.values.row(0) = sigma_vals.values.transpose();
      sigma.values.row(1) = sigma_vals.values.transpose();
      VertexSignal u = heat.solve(f0, sigma, T);
      VertexSignal steady = solve_laplace(DirichletProblem::laplace(g, part, sigma_vals));
      return (u.values - steady.values).cwiseAbs().maxCoeff();
    });

    // --- wave ----------------------------------------------------------------
    const WaveKernel wave(g, part);

    add("wave: kernel value and velocity at t=0", 1e-10, [&] {
      double worst = detail::max_abs(wave.at(0.0));
      worst = std::max(worst, detail::max_abs(wave.dt_at(0.0) -
                                              Eigen::MatrixXd::Identity(s, s)));
      return worst;
    });

    add("wave: kernel curvature = -Delta W", 1e-4, [&] {
      const double h = 1e-4, t = 0.9;
      const Eigen::MatrixXd d2 =
          (wave.at(t + h) - 2.0 * wave.at(t) + wave.at(t - h)) / (h * h);
      return detail::max_abs(d2 + Ds.entries * wave.at(t));
    });

    VertexSignal wf = random_interior(-1.0, 1.0);
    VertexSignal wg = random_interior(-1.0, 1.0);
    const BoundarySignal zero_sigma = BoundarySignal::constant(part, 0.0, 10.5);

    add("wave: energy constant in time", 1e-8, [&] {
      const WaveState start = wave.solve(wf, wg, zero_sigma, 0.0);
      const double e0 = energy(g, part, start);
      double worst = 0.0;
      for (int k = 1; k <= 100; ++k) {
        const WaveState st = wave.solve(wf, wg, zero_sigma, 0.1 * k);
        worst = std::max(worst, std::abs(energy(g, part, st) - e0));
      }
      return worst / std::max(1.0, e0);
    });

    add("wave: initial conditions reproduced", 1e-10, [&] {
      const WaveState st = wave.solve(wf, wg, zero_sigma, 0.0);
      double worst = 0.0;
      for (size_t i = 0; i < part.interior.size(); ++i) {
        worst = std::max(worst, std::abs(st.position.at(part.interior[i]) -
                                         wf.values[static_cast<Eigen::Index>(i)]));
        worst = std::max(worst, std::abs(st.velocity.at(part.interior[i]) -
                                         wg.values[static_cast<Eigen::Index>(i)]));
      }
      return worst;
    });

    add("wave: solution PDE residual", 1e-3, [&] {
      const double h = 1e-4;
      double worst = 0.0;
      for (double t : {0.8, 2.3}) {
        WaveState um = wave.solve(wf, wg, zero_sigma, t - h);
        WaveState u0 = wave.solve(wf, wg, zero_sigma, t);
        WaveState up = wave.solve(wf, wg, zero_sigma, t + h);
        const Eigen::VectorXd d2 =
            (up.position.values - 2.0 * u0.position.values + um.position.values) /
            (h * h);
        const Eigen::VectorXd lap = apply_discrete_laplacian(g, part, u0.position);
        for (size_t i = 0; i < part.interior.size(); ++i) {
          const Eigen::Index row =
              static_cast<Eigen::Index>(u0.position.find(part.interior[i]));
          worst = std::max(worst, std::abs(d2[row] + lap[static_cast<Eigen::Index>(i)]));
        }
      }
      return worst;
    });

    add("wave: repeated solve bitwise identical", 0.0, [&] {
      const WaveState a = wave.solve(wf, wg, zero_sigma, 3.7);
      const WaveState b = solve_wave(g, part, wf, wg, zero_sigma, 3.7);
      double diff = (a.position.values - b.position.values).cwiseAbs().maxCoeff();
      diff = std::max(diff, (a.velocity.values - b.velocity.values).cwiseAbs().maxCoeff());
      return diff;
    });

    add("wave: linearity", 1e-9, [&] {
      const double aa = 0.375, bb = 2.25;
      VertexSignal f2 = random_interior(-1.0, 1.0);
      VertexSignal g2 = random_interior(-1.0, 1.0);
      VertexSignal fc = wf, gc = wg;
      fc.values = aa * wf.values + bb * f2.values;
      gc.values = aa * wg.values + bb * g2.values;
      const WaveState lhs = wave.solve(fc, gc, zero_sigma, 2.1);
      const WaveState r1 = wave.solve(wf, wg, zero_sigma, 2.1);
      const WaveState r2 = wave.solve(f2, g2, zero_sigma, 2.1);
      return (lhs.position.values - aa * r1.position.values - bb * r2.position.values)
          .cwiseAbs()
          .maxCoeff();
    });

    add("wave: position even in time for velocity-free data", 1e-9, [&] {
      // With g0 = 0 and sigma = 0 the modal solution is sum_i f_i cos(w_i t),
      // which is even, so the closed form at -t must match the solver at t.
      VertexSignal zero_g = VertexSignal::zeros(part.interior);
      const double t = 1.9;
      const WaveState forward = wave.solve(wf, zero_g, zero_sigma, t);
      const Eigen::VectorXd ft = wave.spectrum().eigenvectors.transpose() *
                                 (ds.cwiseSqrt().asDiagonal() * wf.values);
      Eigen::VectorXd coeff(ft.size());
      for (Eigen::Index i = 0; i < ft.size(); ++i)
        coeff[i] = ft[i] * std::cos(std::sqrt(wave.spectrum().eigenvalues[i]) * -t);
      const Eigen::VectorXd mirrored =
          ds.cwiseSqrt().cwiseInverse().asDiagonal() *
          (wave.spectrum().eigenvectors * coeff);
      double worst = 0.0;
      for (size_t i = 0; i < part.interior.size(); ++i)
        worst = std::max(worst, std::abs(forward.position.at(part.interior[i]) -
                                         mirrored[static_cast<Eigen::Index>(i)]));
      return worst;
    });
  }

  // --- boundaryless greens ---------------------------------------------------
  if (!connected) {
    skip("greens: boundaryless constraint", "graph is disconnected");
    skip("greens: boundaryless null action", "graph is disconnected");
    skip("heat: Huygens advance by convolution", "graph is disconnected");
  } else {
    add("greens: boundaryless constraint", 1e-8, [&] {
      const GreensFunction gb = greens_boundaryless(g);
      const Eigen::VectorXd phi0 = analytic_null_vector(g);
      const Eigen::MatrixXd target =
          Eigen::MatrixXd::Identity(n, n) - phi0 * phi0.transpose();
      double worst = detail::max_abs(gb.normalized * N.entries - target);
      worst = std::max(worst, detail::max_abs(N.entries * gb.normalized - target));
      return worst;
    });

    add("greens: boundaryless null action", 1e-10, [&] {
      const GreensFunction gb = greens_boundaryless(g);
      return (gb.normalized * analytic_null_vector(g)).cwiseAbs().maxCoeff();
    });

    add("heat: Huygens advance by convolution", 1e-9, [&] {
      BoundaryPartition whole = whole_graph_partition(g);
      HeatKernel kernel(g, whole);
      VertexSignal f0 = VertexSignal::zeros(whole.interior);
      for (Eigen::Index i = 0; i < f0.values.size(); ++i)
        f0.values[i] = rng.uniform(-1.0, 1.0);
      const BoundarySignal none = BoundarySignal::empty();
      double worst = 0.0;
      for (auto [t, delta] : {std::pair<double, double>{0.4, 0.9}, {1.3, 0.2}}) {
        const VertexSignal ut = kernel.solve(f0, none, t);
        const VertexSignal next = kernel.solve(f0, none, t + delta);
        const Eigen::VectorXd advanced = kernel.at(delta) * ut.values;
        worst = std::max(worst, (next.values - advanced).cwiseAbs().maxCoeff());
      }
      return worst;
    });
  }

  // --- metric ------------------------------------------------------------------
  const bool unit = g.unit_weights() && g.unit_lengths();
  const std::string not_unit = "needs unit weights and unit lengths";
  if (!unit || !connected) {
    const std::string why = unit ? "graph is disconnected" : not_unit;
    skip("metric: adjacency eigenvectors certify as traces", why);
    skip("metric: trace space matches the adjacency eigenspace", why);
    skip("metric: frequency count tracks |E| Omega / pi", why);
    skip("metric: window periodicity", why);
    skip("metric: secular scan recovers the closed form", why);
  } else {
    add("metric: adjacency eigenvectors certify as traces", 1e-7, [&] {
      const MetricSpectrum ms = unit_length_spectrum(g, 1);
      double worst = 0.0;
      for (const auto& e : ms.frequencies)
        worst = std::max(worst, e.certified_residual);
      return worst;
    });

    if (n > 50) {
      skip("metric: trace space matches the adjacency eigenspace",
           "projector comparison capped at 50 vertices for runtime");
    } else {
      add("metric: trace space matches the adjacency eigenspace", 1e-7, [&] {
        Eigen::MatrixXd sym =
            Eigen::MatrixXd::Identity(n, n) - N.entries;
        const Spectrum aspec = eigendecompose_symmetric(sym);
        const auto clusters = cluster_eigenvalues(aspec);
        const Eigen::VectorXd inv_sqrt_d = g.degrees().cwiseSqrt().cwiseInverse();
        double worst = 0.0;
        for (const auto& [lambda, members] : clusters) {
          if (std::abs(std::abs(lambda) - 1.0) < 1e-9) continue;  // pole families
          const double omega = std::acos(std::clamp(lambda, -1.0, 1.0));
          // Span of adjacency eigenvectors, as functions on V.
          Eigen::MatrixXd basis(n, static_cast<Eigen::Index>(members.size()));
          for (size_t j = 0; j < members.size(); ++j)
            basis.col(static_cast<Eigen::Index>(j)) =
                inv_sqrt_d.asDiagonal() * aspec.eigenvectors.col(members[j]);
          // Null space of the secular matrix at omega.
          const Spectrum mspec = eigendecompose_symmetric(secular_matrix(g, omega));
          const double cutoff =
              1e-6 * std::max(1.0, mspec.eigenvalues.cwiseAbs().maxCoeff());
          std::vector<Eigen::Index> null_members;
          for (Eigen::Index i = 0; i < mspec.size(); ++i)
            if (std::abs(mspec.eigenvalues[i]) <= cutoff) null_members.push_back(i);
          if (null_members.size() != members.size()) {
            worst = std::max(worst, 1.0);
            continue;
          }
          Eigen::MatrixXd null_basis(n, static_cast<Eigen::Index>(null_members.size()));
          for (size_t j = 0; j < null_members.size(); ++j)
            null_basis.col(static_cast<Eigen::Index>(j)) =
                mspec.eigenvectors.col(null_members[j]);
          worst = std::max(worst, detail::max_abs(detail::projector_onto(basis) -
                                                  detail::projector_onto(null_basis)));
        }
        return worst;
      });
    }

    add("metric: frequency count tracks |E| Omega / pi", 2.0 * g.edge_count() + n, [&] {
      const MetricSpectrum ms = unit_length_spectrum(g, 11);
      double worst = 0.0;
      for (int k = 1; k <= 10; ++k) {
        const double omega_max = 2.0 * std::numbers::pi * k;
        const double expected = g.edge_count() * omega_max / std::numbers::pi;
        worst = std::max(worst, std::abs(ms.count_up_to(omega_max) - expected));
      }
      return worst;
    });

    add("metric: window periodicity", 0.0, [&] {
      const MetricSpectrum ms = unit_length_spectrum(g, 3);
      std::vector<const MetricEntry*> window0;
      for (const auto& e : ms.frequencies)
        if (e.window == 0) window0.push_back(&e);
      double worst = 0.0;
      for (const auto& e : ms.frequencies) {
        if (e.window == 0) continue;
        double best = std::numeric_limits<double>::infinity();
        for (const auto* w0 : window0)
          best = std::min(best,
                          std::abs(e.omega - (w0->omega +
                                              2.0 * std::numbers::pi * e.window)));
        worst = std::max(worst, best);
      }
      return worst;
    });

    if (n > 24) {
      skip("metric: secular scan recovers the closed form",
           "scan capped at 24 vertices for runtime");
    } else {
      add("metric: secular scan recovers the closed form", 1e-8, [&] {
        const double two_pi = 2.0 * std::numbers::pi;
        const MetricSpectrum closed = unit_length_spectrum(g, 1);
        const MetricSpectrum scanned =
            find_metric_eigenvalues(g, 0.05, two_pi - 0.05, 2e-3);
        double worst = 0.0;
        for (const auto& e : closed.frequencies) {
          if (e.omega <= 0.05 || e.omega >= two_pi - 0.05) continue;
          double best = std::numeric_limits<double>::infinity();
          int mult = 0;
          for (const auto& f : scanned.frequencies)
            if (std::abs(f.omega - e.omega) < best) {
              best = std::abs(f.omega - e.omega);
              mult = f.multiplicity;
            }
          worst = std::max(worst, best);
          if (mult != e.multiplicity) worst = std::max(worst, 1.0);
        }
        return worst;
      });
    }
  }

  return results;
}

}  // namespace graphpde
