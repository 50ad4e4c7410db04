#include <catch2/catch_amalgamated.hpp>

#include "testutil.hpp"

using namespace graphpde;
using testutil::max_abs;

namespace {

VertexSignal interior_signal(const BoundaryPartition& part, std::vector<double> vals) {
  return testutil::signal_on(part.interior, vals);
}

}  // namespace

TEST_CASE("heat kernel at t=0 is the identity") {
  SplitMix64 rng(61);
  WeightedGraph g = testutil::random_connected_graph(rng, 9, 0.4);
  BoundaryPartition part = testutil::random_partition(rng, g);
  const Eigen::Index s = static_cast<Eigen::Index>(part.interior.size());
  CHECK(max_abs(heat_kernel(g, part, 0.0) - Eigen::MatrixXd::Identity(s, s)) <= 1e-10);
}

TEST_CASE("path midpoint kernel decays like exp(-t)") {
  WeightedGraph g = testutil::path_graph({1.0, 1.0});
  BoundaryPartition part = boundary_of(g, std::vector<std::string>{"b"});
  for (double t : {0.0, 0.3, 1.0, 2.5})
    CHECK_THAT(heat_kernel(g, part, t)(0, 0),
               Catch::Matchers::WithinAbs(std::exp(-t), 1e-14));
}

TEST_CASE("single-edge whole-graph kernel: phi0 phi0^T + exp(-2t) phi1 phi1^T") {
  WeightedGraph g = testutil::path_graph({1.0});
  BoundaryPartition whole = whole_graph_partition(g);
  for (double t : {0.2, 1.0}) {
    Eigen::MatrixXd expect(2, 2);
    const double a = 0.5 * (1.0 + std::exp(-2.0 * t));
    const double b = 0.5 * (1.0 - std::exp(-2.0 * t));
    expect << a, b, b, a;
    CHECK(max_abs(heat_kernel(g, whole, t) - expect) < 1e-14);
  }
}

TEST_CASE("derived forcing on fixtures") {
  WeightedGraph g = testutil::path_graph({1.0, 1.0});
  BoundaryPartition part = boundary_of(g, std::vector<std::string>{"b"});

  SECTION("zero boundary data gives zero forcing") {
    BoundarySignal sigma = BoundarySignal::constant(part, 0.0, 1.0);
    CHECK(derived_forcing(g, part, sigma, 0.5).values.cwiseAbs().maxCoeff() == 0.0);
  }

  SECTION("asymmetric data: B(b) = sigma(a) w/d = 1/2") {
    Eigen::MatrixXd samples(2, 2);
    samples << 1.0, 0.0, 1.0, 0.0;  // columns follow boundary order {a, c}
    BoundarySignal sigma = BoundarySignal::sampled(part, 1.0, samples);
    VertexSignal b = derived_forcing(g, part, sigma, 0.25);
    CHECK_THAT(b.at(g.index_of("b")), Catch::Matchers::WithinAbs(0.5, 1e-15));
  }

  SECTION("interior vertex with no boundary neighbor gets zero") {
    WeightedGraph p4 = testutil::path_graph({1.0, 1.0, 1.0});
    BoundaryPartition p = boundary_of(p4, std::vector<std::string>{"a", "b"});
    BoundarySignal sigma = BoundarySignal::constant(p, 2.0, 1.0);
    VertexSignal b = derived_forcing(p4, p, sigma, 0.0);
    CHECK(b.at(p4.index_of("a")) == 0.0);
    CHECK_THAT(b.at(p4.index_of("b")), Catch::Matchers::WithinAbs(1.0, 1e-15));
  }
}

TEST_CASE("scalar solves on the path midpoint") {
  WeightedGraph g = testutil::path_graph({1.0, 1.0});
  BoundaryPartition part = boundary_of(g, std::vector<std::string>{"b"});
  const int b = g.index_of("b");

  SECTION("pure decay: u(b,t) = exp(-t)") {
    VertexSignal f = interior_signal(part, {1.0});
    BoundarySignal sigma = BoundarySignal::constant(part, 0.0, 5.0);
    for (double t : {0.0, 0.5, 1.0, 3.0})
      CHECK_THAT(solve_heat(g, part, f, sigma, t).at(b),
                 Catch::Matchers::WithinAbs(std::exp(-t), 1e-13));
  }

  SECTION("pure forcing: u(b,t) = 1 - exp(-t)") {
    VertexSignal f = interior_signal(part, {0.0});
    BoundarySignal sigma = BoundarySignal::constant(part, 1.0, 5.0);
    for (double t : {0.0, 0.5, 1.0, 3.0})
      CHECK_THAT(solve_heat(g, part, f, sigma, t).at(b),
                 Catch::Matchers::WithinAbs(1.0 - std::exp(-t), 1e-13));
  }
}

TEST_CASE("homogeneous solutions follow the eigenbasis decay") {
  SplitMix64 rng(62);
  WeightedGraph g = testutil::random_connected_graph(rng, 10, 0.35);
  BoundaryPartition part = testutil::random_partition(rng, g);
  HeatKernel kernel(g, part);
  VertexSignal f = VertexSignal::zeros(part.interior);
  for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values[i] = rng.uniform(-1.0, 1.0);
  const BoundarySignal zero = BoundarySignal::constant(part, 0.0, 3.0);

  const Eigen::VectorXd ds = interior_degrees(g, part.interior);
  const Eigen::VectorXd coeffs = kernel.spectrum().eigenvectors.transpose() *
                                 (ds.cwiseSqrt().asDiagonal() * f.values);
  for (double t : {0.4, 1.7}) {
    Eigen::VectorXd damped = coeffs;
    for (Eigen::Index i = 0; i < damped.size(); ++i)
      damped[i] *= std::exp(-kernel.spectrum().eigenvalues[i] * t);
    const Eigen::VectorXd expect = ds.cwiseSqrt().cwiseInverse().asDiagonal() *
                                   (kernel.spectrum().eigenvectors * damped);
    VertexSignal u = kernel.solve(f, zero, t);
    for (size_t i = 0; i < part.interior.size(); ++i)
      CHECK_THAT(u.at(part.interior[i]),
                 Catch::Matchers::WithinAbs(expect[static_cast<Eigen::Index>(i)], 1e-12));
  }
}

TEST_CASE("weak maximum principle for nonnegative data") {
  SplitMix64 rng(63);
  for (int rep = 0; rep < 5; ++rep) {
    WeightedGraph g = testutil::random_connected_graph(rng, rng.uniform_int(4, 16), 0.3);
    BoundaryPartition part = testutil::random_partition(rng, g);
    HeatKernel kernel(g, part);
    VertexSignal f = VertexSignal::zeros(part.interior);
    for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values[i] = rng.uniform(0.0, 2.0);
    BoundarySignal sigma = BoundarySignal::constant(part, rng.uniform(0.0, 1.0), 10.0);
    for (int k = 0; k <= 20; ++k) {
      VertexSignal u = kernel.solve(f, sigma, 0.5 * k);
      CHECK(u.values.minCoeff() >= -1e-10);
    }
  }
}

TEST_CASE("Huygens property with S = V") {
  SplitMix64 rng(64);
  WeightedGraph g = testutil::random_connected_graph(rng, 12, 0.3);
  BoundaryPartition whole = whole_graph_partition(g);
  HeatKernel kernel(g, whole);
  VertexSignal f = VertexSignal::zeros(whole.interior);
  for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values[i] = rng.uniform(-1.0, 1.0);
  const BoundarySignal none = BoundarySignal::empty();
  for (auto [t, delta] : {std::pair<double, double>{0.7, 0.4}, {2.0, 1.3}}) {
    const VertexSignal ut = kernel.solve(f, none, t);
    const VertexSignal advanced = kernel.solve(f, none, t + delta);
    const Eigen::VectorXd via_kernel = kernel.at(delta) * ut.values;
    CHECK((advanced.values - via_kernel).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("semigroup property of the kernel") {
  SplitMix64 rng(65);
  WeightedGraph g = testutil::random_connected_graph(rng, 10, 0.4);
  BoundaryPartition part = testutil::random_partition(rng, g);
  HeatKernel kernel(g, part);
  CHECK(max_abs(kernel.at(1.9) - kernel.at(0.8) * kernel.at(1.1)) <= 1e-9);
}

TEST_CASE("finite-difference residual of the heat equation") {
  SplitMix64 rng(66);
  WeightedGraph g = testutil::random_connected_graph(rng, 9, 0.4);
  BoundaryPartition part = testutil::random_partition(rng, g);
  HeatKernel kernel(g, part);
  VertexSignal f = VertexSignal::zeros(part.interior);
  for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values[i] = rng.uniform(-1.0, 1.0);
  BoundarySignal sigma = BoundarySignal::constant(part, 0.6, 5.0);
  const double h = 1e-5;
  for (double t : {0.5, 2.0}) {
    VertexSignal um = kernel.solve(f, sigma, t - h);
    VertexSignal u0 = kernel.solve(f, sigma, t);
    VertexSignal up = kernel.solve(f, sigma, t + h);
    const Eigen::VectorXd dudt = (up.values - um.values) / (2.0 * h);
    const Eigen::VectorXd lap = apply_discrete_laplacian(g, part, u0);
    for (size_t i = 0; i < part.interior.size(); ++i) {
      const int row = u0.find(part.interior[i]);
      CHECK(std::abs(dudt[row] + lap[static_cast<Eigen::Index>(i)]) <= 1e-4);
    }
  }
}

TEST_CASE("long-time limit matches the harmonic extension") {
  SplitMix64 rng(67);
  WeightedGraph g = testutil::random_connected_graph(rng, 8, 0.4);
  BoundaryPartition part = testutil::random_partition(rng, g);
  HeatKernel kernel(g, part);
  const double lambda1 = kernel.spectrum().eigenvalues[0];
  const double T = 40.0 / lambda1;

  VertexSignal sigma_vals = VertexSignal::zeros(part.boundary);
  for (Eigen::Index i = 0; i < sigma_vals.values.size(); ++i)
    sigma_vals.values[i] = rng.uniform(-2.0, 2.0);
  BoundarySignal sigma = BoundarySignal::constant(part, 0.0, T);
  sigma.values.row(0) = sigma_vals.values.transpose();
  sigma.values.row(1) = sigma_vals.values.transpose();

  VertexSignal f = VertexSignal::zeros(part.interior);
  for (Eigen::Index i = 0; i < f.values.size(); ++i) f.values[i] = rng.uniform(-2.0, 2.0);

  VertexSignal u = kernel.solve(f, sigma, T);
  VertexSignal steady = solve_laplace(DirichletProblem::laplace(g, part, sigma_vals));
  CHECK((u.values - steady.values).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("piecewise-constant refinement converges at first order") {
  // sigma(t) = sin(t) approximated on m samples; halving the step should
  // roughly halve the error against a much finer reference.
  WeightedGraph g = testutil::path_graph({1.0, 1.0});
  BoundaryPartition part = boundary_of(g, std::vector<std::string>{"b"});
  HeatKernel kernel(g, part);
  VertexSignal f = interior_signal(part, {0.0});
  const double t_end = 3.0;
  const int b = g.index_of("b");

  auto solution_with_samples = [&](int m) {
    Eigen::MatrixXd samples(m, 2);
    for (int k = 0; k < m; ++k) {
      const double tk = t_end * k / (m - 1);
      samples(k, 0) = std::sin(tk);
      samples(k, 1) = std::sin(tk);
    }
    BoundarySignal sigma = BoundarySignal::sampled(part, t_end / (m - 1), samples);
    return kernel.solve(f, sigma, t_end).at(b);
  };

  const double reference = solution_with_samples(4097);
  const double err_m = std::abs(solution_with_samples(33) - reference);
  const double err_2m = std::abs(solution_with_samples(65) - reference);
  CHECK(err_2m <= 0.65 * err_m + 1e-12);
}

TEST_CASE("boundary rows carry sigma, right-continuous at samples") {
  WeightedGraph g = testutil::path_graph({1.0, 1.0});
  BoundaryPartition part = boundary_of(g, std::vector<std::string>{"b"});
  Eigen::MatrixXd samples(3, 2);
  samples << 0.0, 10.0, 1.0, 20.0, 2.0, 30.0;  // t = 0, 1, 2
  BoundarySignal sigma = BoundarySignal::sampled(part, 1.0, samples);
  VertexSignal f = interior_signal(part, {0.0});
  const int a = g.index_of("a");
  CHECK(solve_heat(g, part, f, sigma, 0.0).at(a) == 0.0);
  CHECK(solve_heat(g, part, f, sigma, 0.5).at(a) == 0.0);
  CHECK(solve_heat(g, part, f, sigma, 1.0).at(a) == 1.0);  // right-continuous
  CHECK(solve_heat(g, part, f, sigma, 1.75).at(a) == 1.0);
  CHECK(solve_heat(g, part, f, sigma, 2.0).at(a) == 2.0);
}

TEST_CASE("heat input validation") {
  WeightedGraph g = testutil::path_graph({1.0, 1.0});
  BoundaryPartition part = boundary_of(g, std::vector<std::string>{"b"});
  VertexSignal f = interior_signal(part, {1.0});
  BoundarySignal sigma = BoundarySignal::constant(part, 0.0, 1.0);

  CHECK_THROWS_AS(heat_kernel(g, part, -0.5), Error);
  CHECK_THROWS_AS(solve_heat(g, part, f, sigma, 2.0), Error);  // grid too short
  VertexSignal wrong = VertexSignal::zeros(part.closure);
  CHECK_THROWS_AS(solve_heat(g, part, wrong, sigma, 0.5), Error);

  // boundaryless partitions reject boundary data
  BoundaryPartition whole = whole_graph_partition(g);
  VertexSignal f_all = VertexSignal::zeros(whole.interior);
  CHECK_THROWS_AS(solve_heat(g, whole, f_all, sigma, 0.5), Error);
  CHECK_NOTHROW(solve_heat(g, whole, f_all, BoundarySignal::empty(), 0.5));
}

TEST_CASE("kernel entries are strictly positive for connected S and t > 0") {
  SplitMix64 rng(68);
  for (int rep = 0; rep < 5; ++rep) {
    WeightedGraph g = testutil::random_connected_graph(rng, rng.uniform_int(5, 14), 0.3);
    // grow a connected interior from vertex 0, leaving at least one vertex out
    std::vector<int> interior{0};
    std::vector<char> in(static_cast<size_t>(g.vertex_count()), 0);
    in[0] = 1;
    while (static_cast<int>(interior.size()) < g.vertex_count() - 1) {
      bool grew = false;
      for (size_t i = 0; i < interior.size() && !grew; ++i)
        for (const auto& nb : g.neighbors(interior[i]))
          if (!in[static_cast<size_t>(nb.vertex)]) {
            in[static_cast<size_t>(nb.vertex)] = 1;
            interior.push_back(nb.vertex);
            grew = true;
            break;
          }
      if (!grew) break;
      if (rng.uniform() < 0.3) break;  // stop early sometimes
    }
    std::sort(interior.begin(), interior.end());
    BoundaryPartition part = boundary_of(g, std::span<const int>(interior));
    if (!part.every_component_touches_boundary) continue;
    for (double t : {0.1, 1.0}) {
      Eigen::MatrixXd k = heat_kernel(g, part, t);
      CHECK(k.minCoeff() > 0.0);
    }
  }
}

TEST_CASE("whole-graph heat flow requires connectivity") {
  WeightedGraph g = parse_graph("a\tb\t1\nc\td\t1\n");
  BoundaryPartition whole = whole_graph_partition(g);
  CHECK_THROWS_AS(HeatKernel(g, whole), Error);
}
