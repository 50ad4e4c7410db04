#pragma once

#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "graphpde/graph.hpp"
#include "graphpde/laplacian.hpp"

namespace graphpde {

/// Ordered eigenpairs of a symmetric operator: ascending eigenvalues with an
/// aligned orthonormal eigenvector per column. `null_vector` carries the
/// analytic zero-mode vector when a solver substituted one.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  std::optional<Eigen::VectorXd> null_vector;

  Eigen::Index size() const { return eigenvalues.size(); }
};

namespace detail {

inline double max_abs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  for (Eigen::Index p = 0; p < a.rows(); ++p)
    for (Eigen::Index q = 0; q < a.cols(); ++q)
      if (p != q) sum += a(p, q) * a(p, q);
  return std::sqrt(sum);
}

/// Flips each eigenvector so its first component of largest magnitude is
/// nonnegative; pins the sign freedom so identical inputs give identical bits.
inline void canonicalize_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index lead = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      double a = std::abs(vectors(i, j));
      if (a > best) {
        best = a;
        lead = i;
      }
    }
    if (vectors(lead, j) < 0.0) vectors.col(j) = -vectors.col(j);
  }
}

}  // namespace detail

/// Dense symmetric eigendecomposition by cyclic Jacobi rotations: sweeps in a
/// fixed (p,q) order until the off-diagonal Frobenius norm drops below
/// 1e−13·‖M‖_F, at most 30 sweeps. No pivoting, no threading, so the output
/// is a pure function of the input bits.
inline Spectrum eigendecompose_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw Error("not_square", "matrix is not square");
  const double scale = detail::max_abs(m);
  if (detail::max_abs(m - m.transpose()) > 1e-10 * std::max(1.0, scale))
    throw Error("not_symmetric", "matrix is not symmetric within 1e-10 relative");

  const Eigen::Index n = m.rows();
  Eigen::MatrixXd a = m;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double frob = m.norm();
  const double target = 1e-13 * frob;

  bool converged = (n <= 1) || detail::off_diagonal_norm(a) <= target;
  for (int sweep = 0; sweep < 30 && !converged; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p), aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        // Pin the rotated 2x2 block exactly.
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = detail::off_diagonal_norm(a) <= target;
  }
  if (!converged)
    throw Error("no_convergence",
                "Jacobi sweeps exhausted; off-diagonal norm " +
                    format_double(detail::off_diagonal_norm(a)) + " > " +
                    format_double(target));

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i) < a(j, j);
  });

  Spectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.eigenvalues[j] = a(order[static_cast<size_t>(j)], order[static_cast<size_t>(j)]);
    out.eigenvectors.col(j) = v.col(order[static_cast<size_t>(j)]);
  }
  detail::canonicalize_signs(out.eigenvectors);
  return out;
}

/// Rayleigh quotient of f on S̄:
///   Σ_{x,y∈S̄, (x,y)∈E} w_(x,y)(f(x)−f(y))²  /  Σ_{x∈S} f(x)² d_x
/// with each undirected edge counted once in the numerator.
inline double rayleigh_quotient(const WeightedGraph& g,
                                const BoundaryPartition& part,
                                const VertexSignal& f) {
  if (!f.same_domain(part.closure))
    throw Error("signal_domain", "signal is not defined on exactly the closure");
  double num = 0.0;
  for (const auto& e : g.edges()) {
    int iu = f.find(e.u), iv = f.find(e.v);
    if (iu < 0 || iv < 0) continue;  // edge leaves the closure
    const double d = f.values[iu] - f.values[iv];
    num += e.weight * d * d;
  }
  double den = 0.0;
  for (int x : part.interior) den += f.at(x) * f.at(x) * g.degree(x);
  if (den == 0.0)
    throw Error("zero_denominator", "signal vanishes identically on the interior");
  return num / den;
}

/// Groups eigenvalues into clusters closer than 1e−10 relative; degenerate
/// eigenspaces should be compared through their projectors, never through
/// individual eigenvectors.
inline std::vector<std::pair<double, std::vector<Eigen::Index>>> cluster_eigenvalues(
    const Spectrum& s, double rel_tol = 1e-10) {
  std::vector<std::pair<double, std::vector<Eigen::Index>>> clusters;
  const double scale = std::max(1.0, s.eigenvalues.size() == 0
                                         ? 0.0
                                         : s.eigenvalues.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    if (!clusters.empty() &&
        std::abs(s.eigenvalues[i] - clusters.back().first) <= rel_tol * scale) {
      clusters.back().second.push_back(i);
    } else {
      clusters.push_back({s.eigenvalues[i], {i}});
    }
  }
  return clusters;
}

/// Orthogonal projector onto the span of the given eigenvector columns.
inline Eigen::MatrixXd spectral_projector(const Spectrum& s,
                                          std::span<const Eigen::Index> members) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(s.eigenvectors.rows(), s.eigenvectors.rows());
  for (Eigen::Index j : members)
    p += s.eigenvectors.col(j) * s.eigenvectors.col(j).transpose();
  return p;
}

}  // namespace graphpde
