// Command-line front end: graph ingestion, the spectral solvers, CSV/JSON
// exports, and the built-in verification suite.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphpde/graphpde.hpp"

namespace {

using namespace graphpde;

struct TimeGrid {
  double start = 0.0;
  double end = 0.0;
  int steps = 1;

  std::vector<double> times() const {
    std::vector<double> out;
    if (steps == 1) {
      out.push_back(start);
      return out;
    }
    for (int k = 0; k < steps; ++k)
      out.push_back(start + (end - start) * k / (steps - 1));
    return out;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("file_not_found", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TimeGrid parse_time_grid(const std::string& spec) {
  TimeGrid grid;
  const auto c1 = spec.find(':');
  const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw Error("bad_argument", "time grid must be start:end:steps, got '" + spec + "'");
  double start = 0.0, end = 0.0;
  if (!parse_double(spec.substr(0, c1), start) ||
      !parse_double(spec.substr(c1 + 1, c2 - c1 - 1), end))
    throw Error("bad_argument", "time grid must be start:end:steps, got '" + spec + "'");
  try {
    grid.steps = std::stoi(spec.substr(c2 + 1));
  } catch (const std::exception&) {
    throw Error("bad_argument", "bad step count in '" + spec + "'");
  }
  grid.start = start;
  grid.end = end;
  if (grid.steps < 1) throw Error("bad_argument", "steps must be at least 1");
  if (grid.end < grid.start) throw Error("bad_argument", "t_end must be >= t_start");
  if (grid.start < 0.0) throw Error("bad_argument", "t_start must be >= 0");
  return grid;
}

std::map<std::string, double> parse_inline_signal(const std::string& spec) {
  std::map<std::string, double> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw Error("bad_argument", "signal entries look like vertex=value, got '" + item + "'");
    double value = 0.0;
    if (!parse_double(item.substr(eq + 1), value))
      throw Error("bad_argument", "bad number in '" + item + "'");
    out[item.substr(0, eq)] = value;
  }
  return out;
}

WeightedGraph load_graph(const std::string& path) { return parse_graph(slurp(path)); }

BoundaryPartition load_partition(const WeightedGraph& g, const std::string& inline_ids,
                                 const std::string& file) {
  std::vector<std::string> ids;
  if (!file.empty()) {
    ids = parse_interior_list(slurp(file));
  } else if (!inline_ids.empty()) {
    std::stringstream ss(inline_ids);
    std::string id;
    while (std::getline(ss, id, ','))
      if (!id.empty()) ids.push_back(id);
  } else {
    return whole_graph_partition(g);
  }
  return boundary_of(g, std::span<const std::string>(ids));
}

VertexSignal load_interior_signal(const WeightedGraph& g, const BoundaryPartition& part,
                                  const std::string& inline_spec,
                                  const std::string& file) {
  std::map<std::string, double> map;
  if (!file.empty())
    map = parse_signal_map(slurp(file));
  else if (!inline_spec.empty())
    map = parse_inline_signal(inline_spec);
  return VertexSignal::from_map(g, map, part.interior);
}

BoundarySignal load_boundary_signal(const WeightedGraph& g, const BoundaryPartition& part,
                                    const std::string& inline_spec,
                                    const std::string& file, double t_end) {
  if (part.boundary.empty()) {
    if (!inline_spec.empty() || !file.empty())
      throw Error("signal_domain", "the partition has no boundary; drop --sigma");
    return BoundarySignal::empty();
  }
  if (!file.empty()) return parse_boundary_signal(g, part, slurp(file));
  const double span = std::max(t_end, 1.0);
  if (inline_spec.rfind("const:", 0) == 0) {
    double value = 0.0;
    if (!parse_double(inline_spec.substr(6), value))
      throw Error("bad_argument", "bad number in '" + inline_spec + "'");
    return BoundarySignal::constant(part, value, span);
  }
  VertexSignal values = VertexSignal::from_map(
      g, inline_spec.empty() ? std::map<std::string, double>{}
                             : parse_inline_signal(inline_spec),
      part.boundary);
  Eigen::MatrixXd samples(2, values.values.size());
  samples.row(0) = values.values.transpose();
  samples.row(1) = values.values.transpose();
  return BoundarySignal::sampled(part, span, std::move(samples));
}

void emit(const std::string& output_path, const std::string& content) {
  if (output_path.empty() || output_path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw Error("io_error", "cannot write '" + output_path + "'");
  out << content;
}

// Per-subcommand options gathered by CLI11.
struct Options {
  std::string graph;
  std::string interior, interior_file;
  std::string f, f_file;
  std::string g0, g0_file;
  std::string sigma, sigma_file;
  std::string source, source_file;
  std::string laplacian = "normalized";
  std::string which = "normalized";
  std::string time = "0:1:2";
  std::string output;
  std::string format = "csv";
  int k_max = 1;
  std::string scan;
  bool include_excluded = false;
  bool matrix_only = false;
  double tol_scale = 1.0;
};

int cmd_spectrum(const Options& opt) {
  WeightedGraph g = load_graph(opt.graph);
  const bool restricted = !opt.interior.empty() || !opt.interior_file.empty();
  BoundaryPartition part = load_partition(g, opt.interior, opt.interior_file);

  OperatorMatrix base = [&] {
    if (opt.laplacian == "combinatorial") return combinatorial_laplacian(g);
    if (opt.laplacian == "normalized") return normalized_laplacian(g);
    if (opt.laplacian == "discrete") return discrete_laplacian(g);
    if (opt.laplacian == "adjacency") return normalized_adjacency(g);
    throw Error("bad_argument", "unknown laplacian '" + opt.laplacian + "'");
  }();

  std::vector<int> vertices =
      restricted ? part.interior : detail::all_vertices(g);

  if (opt.matrix_only) {
    OperatorMatrix m = restricted ? restrict_to(base, part) : base;
    std::ostringstream out;
    if (opt.format == "json") {
      nlohmann::json doc;
      std::vector<std::string> ids;
      for (int v : m.vertices) ids.push_back(g.id_of(v));
      doc["vertices"] = ids;
      doc["kind"] = to_string(m.kind);
      nlohmann::json rows = nlohmann::json::array();
      for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
        std::vector<double> row(m.entries.cols());
        for (Eigen::Index j = 0; j < m.entries.cols(); ++j)
          row[static_cast<size_t>(j)] = m.entries(i, j);
        rows.push_back(row);
      }
      doc["matrix"] = std::move(rows);
      out << doc.dump(2) << '\n';
    } else {
      write_operator_csv(out, g, m);
    }
    emit(opt.output, out.str());
    return 0;
  }

  // Δ and Ã are similar to symmetric matrices; decompose the conjugate and
  // transport the eigenvectors back through T^(−1/2).
  Spectrum spec;
  if (opt.laplacian == "combinatorial") {
    OperatorMatrix m = restricted ? restrict_to(base, part) : base;
    spec = eigendecompose_symmetric(m.entries);
  } else {
    OperatorMatrix sym = normalized_laplacian(g);
    if (restricted) sym = restrict_to(sym, part);
    spec = eigendecompose_symmetric(sym.entries);
    if (opt.laplacian == "adjacency") {
      spec.eigenvalues = (1.0 - spec.eigenvalues.array()).matrix().eval();
      std::reverse(spec.eigenvalues.data(),
                   spec.eigenvalues.data() + spec.eigenvalues.size());
      spec.eigenvectors = spec.eigenvectors.rowwise().reverse().eval();
    }
    if (opt.laplacian != "normalized") {
      for (size_t i = 0; i < vertices.size(); ++i)
        spec.eigenvectors.row(static_cast<Eigen::Index>(i)) /=
            std::sqrt(g.degree(vertices[i]));
      for (Eigen::Index j = 0; j < spec.eigenvectors.cols(); ++j)
        spec.eigenvectors.col(j) /= spec.eigenvectors.col(j).norm();
      detail::canonicalize_signs(spec.eigenvectors);
    }
  }

  std::ostringstream out;
  if (opt.format == "json")
    out << spectrum_to_json(g, spec, vertices).dump(2) << '\n';
  else
    write_spectrum_csv(out, g, spec, vertices);
  emit(opt.output, out.str());
  return 0;
}

int cmd_greens(const Options& opt) {
  WeightedGraph g = load_graph(opt.graph);
  BoundaryPartition part = load_partition(g, opt.interior, opt.interior_file);
  GreensFunction gf = part.boundary.empty() ? greens_boundaryless(g)
                                            : greens_dirichlet(g, part);
  const Eigen::MatrixXd& m =
      opt.which == "unnormalized" ? gf.unnormalized : gf.normalized;
  std::ostringstream out;
  if (opt.format == "json") {
    nlohmann::json doc;
    std::vector<std::string> ids;
    for (int v : gf.vertices) ids.push_back(g.id_of(v));
    doc["vertices"] = ids;
    doc["kind"] = opt.which;
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      std::vector<double> row(m.cols());
      for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<size_t>(j)] = m(i, j);
      rows.push_back(row);
    }
    doc["matrix"] = std::move(rows);
    out << doc.dump(2) << '\n';
  } else {
    write_matrix_csv(out, g, m, gf.vertices);
  }
  emit(opt.output, out.str());
  return 0;
}

int cmd_solve_elliptic(const Options& opt, bool poisson) {
  WeightedGraph g = load_graph(opt.graph);
  BoundaryPartition part = load_partition(g, opt.interior, opt.interior_file);
  std::map<std::string, double> sigma_map;
  if (!opt.sigma_file.empty())
    sigma_map = parse_signal_map(slurp(opt.sigma_file));
  else if (!opt.sigma.empty())
    sigma_map = parse_inline_signal(opt.sigma);
  VertexSignal sigma = VertexSignal::from_map(g, sigma_map, part.boundary);

  VertexSignal f = [&] {
    if (!poisson) return solve_laplace(DirichletProblem::laplace(g, part, sigma));
    VertexSignal source = load_interior_signal(g, part, opt.source, opt.source_file);
    return solve_poisson(DirichletProblem::poisson(g, part, sigma, source));
  }();

  std::ostringstream out;
  if (opt.format == "json")
    out << signal_to_json(g, f).dump(2) << '\n';
  else
    write_signal_csv(out, g, f);
  emit(opt.output, out.str());
  return 0;
}

int cmd_solve_heat(const Options& opt) {
  WeightedGraph g = load_graph(opt.graph);
  BoundaryPartition part = load_partition(g, opt.interior, opt.interior_file);
  TimeGrid grid = parse_time_grid(opt.time);
  VertexSignal f = load_interior_signal(g, part, opt.f, opt.f_file);
  BoundarySignal sigma =
      load_boundary_signal(g, part, opt.sigma, opt.sigma_file, grid.end);

  HeatKernel kernel(g, part);
  std::vector<double> times = grid.times();
  std::vector<VertexSignal> rows;
  rows.reserve(times.size());
  for (double t : times) rows.push_back(kernel.solve(f, sigma, t));

  std::ostringstream out;
  if (opt.format == "json") {
    nlohmann::json doc;
    doc["t"] = times;
    std::vector<std::string> ids;
    for (int v : part.closure) ids.push_back(g.id_of(v));
    doc["vertices"] = ids;
    nlohmann::json u = nlohmann::json::array();
    for (const auto& r : rows)
      u.push_back(std::vector<double>(r.values.data(), r.values.data() + r.values.size()));
    doc["u"] = std::move(u);
    out << doc.dump(2) << '\n';
  } else {
    write_time_series_csv(out, g, times, rows);
  }
  emit(opt.output, out.str());
  return 0;
}

int cmd_solve_wave(const Options& opt) {
  WeightedGraph g = load_graph(opt.graph);
  BoundaryPartition part = load_partition(g, opt.interior, opt.interior_file);
  TimeGrid grid = parse_time_grid(opt.time);
  VertexSignal f = load_interior_signal(g, part, opt.f, opt.f_file);
  VertexSignal g0 = load_interior_signal(g, part, opt.g0, opt.g0_file);
  BoundarySignal sigma =
      load_boundary_signal(g, part, opt.sigma, opt.sigma_file, grid.end);

  WaveKernel kernel(g, part);
  std::vector<double> times = grid.times();
  std::vector<WaveState> states;
  std::vector<double> energies;
  for (double t : times) {
    states.push_back(kernel.solve(f, g0, sigma, t));
    energies.push_back(energy(g, part, states.back()));
  }

  std::ostringstream out;
  if (opt.format == "json") {
    nlohmann::json doc;
    doc["t"] = times;
    std::vector<std::string> ids;
    for (int v : part.closure) ids.push_back(g.id_of(v));
    doc["vertices"] = ids;
    nlohmann::json u = nlohmann::json::array(), ut = nlohmann::json::array();
    for (const auto& st : states) {
      u.push_back(std::vector<double>(st.position.values.data(),
                                      st.position.values.data() + st.position.values.size()));
      ut.push_back(std::vector<double>(st.velocity.values.data(),
                                       st.velocity.values.data() + st.velocity.values.size()));
    }
    doc["u"] = std::move(u);
    doc["u_t"] = std::move(ut);
    doc["energy"] = energies;
    out << doc.dump(2) << '\n';
  } else {
    write_wave_series_csv(out, g, states, energies);
  }
  emit(opt.output, out.str());
  return 0;
}

int cmd_metric(const Options& opt) {
  WeightedGraph g = load_graph(opt.graph);
  MetricSpectrum spectrum;
  if (!opt.scan.empty()) {
    TimeGrid window = parse_time_grid(opt.scan);  // lo:hi:steps over omega
    if (window.steps < 2)
      throw Error("bad_argument", "scan needs at least 2 grid points");
    spectrum = find_metric_eigenvalues(
        g, window.start, window.end,
        (window.end - window.start) / (window.steps - 1));
  } else {
    spectrum = unit_length_spectrum(g, opt.k_max);
  }
  std::ostringstream out;
  if (opt.format == "json")
    out << metric_to_json(spectrum).dump(2) << '\n';
  else
    write_metric_csv(out, spectrum, opt.include_excluded);
  emit(opt.output, out.str());
  return 0;
}

int cmd_verify(const Options& opt) {
  WeightedGraph g = load_graph(opt.graph);
  double tol_scale = opt.tol_scale;
  if (const char* env = std::getenv("GRAPHPDE_TOL_SCALE"); env && opt.tol_scale == 1.0) {
    double v = 0.0;
    if (parse_double(env, v) && v > 0.0) tol_scale = v;
  }
  const std::vector<CheckResult> results = run_verification(g, tol_scale);

  std::ostringstream out;
  int failures = 0;
  for (const auto& r : results) {
    const char* status = r.skipped ? "SKIP" : (r.passed ? "PASS" : "FAIL");
    if (!r.skipped && !r.passed) ++failures;
    out << status << '\t'
        << (r.skipped ? "-" : format_double(r.measured)) << '\t'
        << (r.skipped ? "-" : format_double(r.tolerance)) << '\t' << r.name;
    if (!r.note.empty()) out << "\t(" << r.note << ')';
    out << '\n';
  }
  out << (failures == 0 ? "OK" : "FAILED") << ": " << results.size()
      << " checks, " << failures << " failure(s)\n";
  emit(opt.output, out.str());
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral Laplace/Poisson, heat and wave solvers on weighted graphs"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool with_interior = true) {
    sub->add_option("--graph", opt.graph, "graph file (TSV or JSON)")->required();
    sub->add_option("--output,-o", opt.output, "output path (default stdout)");
    sub->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    if (with_interior) {
      sub->add_option("--interior", opt.interior, "comma-separated interior vertex ids");
      sub->add_option("--interior-file", opt.interior_file,
                      "JSON list of interior vertex ids");
    }
  };

  auto* spectrum = app.add_subcommand("spectrum", "eigenpairs of a graph operator");
  add_common(spectrum);
  spectrum->add_option("--laplacian", opt.laplacian,
                       "combinatorial | discrete | normalized | adjacency")
      ->check(CLI::IsMember({"combinatorial", "discrete", "normalized", "adjacency"}));
  spectrum->add_flag("--matrix", opt.matrix_only,
                     "emit the operator matrix itself instead of eigenpairs");

  auto* greens = app.add_subcommand("greens", "Green's function of the Dirichlet operator");
  add_common(greens);
  greens->add_option("--which", opt.which, "normalized | unnormalized")
      ->check(CLI::IsMember({"normalized", "unnormalized"}));

  auto* laplace = app.add_subcommand("solve-laplace", "harmonic extension of boundary data");
  add_common(laplace);
  laplace->add_option("--sigma", opt.sigma, "boundary values vertex=value,...");
  laplace->add_option("--sigma-file", opt.sigma_file, "JSON map of boundary values");

  auto* poisson = app.add_subcommand("solve-poisson", "Poisson problem with Dirichlet data");
  add_common(poisson);
  poisson->add_option("--sigma", opt.sigma, "boundary values vertex=value,...");
  poisson->add_option("--sigma-file", opt.sigma_file, "JSON map of boundary values");
  poisson->add_option("--g", opt.source, "source term vertex=value,...");
  poisson->add_option("--g-file", opt.source_file, "JSON map for the source term");

  auto* heat = app.add_subcommand("solve-heat", "heat flow with Dirichlet forcing");
  add_common(heat);
  heat->add_option("--f", opt.f, "initial data vertex=value,...");
  heat->add_option("--f-file", opt.f_file, "JSON map of initial data");
  heat->add_option("--sigma", opt.sigma,
                   "boundary data: const:VALUE or vertex=value,... (constant in time)");
  heat->add_option("--sigma-file", opt.sigma_file, "sampled boundary signal (JSON)");
  heat->add_option("--t", opt.time, "time grid start:end:steps (both endpoints included)");

  auto* wave = app.add_subcommand("solve-wave", "wave evolution with Dirichlet forcing");
  add_common(wave);
  wave->add_option("--f", opt.f, "initial position vertex=value,...");
  wave->add_option("--f-file", opt.f_file, "JSON map of initial position");
  wave->add_option("--g0", opt.g0, "initial velocity vertex=value,...");
  wave->add_option("--g0-file", opt.g0_file, "JSON map of initial velocity");
  wave->add_option("--sigma", opt.sigma,
                   "boundary data: const:VALUE or vertex=value,... (constant in time)");
  wave->add_option("--sigma-file", opt.sigma_file, "sampled boundary signal (JSON)");
  wave->add_option("--t", opt.time, "time grid start:end:steps (both endpoints included)");

  auto* metric = app.add_subcommand(
      "metric-spectrum", "edge-based eigenvalues of the geometric realization");
  add_common(metric, /*with_interior=*/false);
  metric->add_option("--k-max", opt.k_max,
                     "closed form: number of 2-pi windows (unit weights/lengths)");
  metric->add_option("--scan", opt.scan,
                     "secular scan window lo:hi:points (arbitrary lengths)");
  metric->add_flag("--excluded", opt.include_excluded,
                   "also list excluded frequencies (omega*l on the pi grid)");

  auto* verify = app.add_subcommand("verify", "run the invariant suite on a graph");
  add_common(verify, /*with_interior=*/false);
  verify->add_option("--tol-scale", opt.tol_scale,
                     "scale all tolerances (also: GRAPHPDE_TOL_SCALE)");

  try {
    app.parse(argc, argv);
    if (spectrum->parsed()) return cmd_spectrum(opt);
    if (greens->parsed()) return cmd_greens(opt);
    if (laplace->parsed()) return cmd_solve_elliptic(opt, false);
    if (poisson->parsed()) return cmd_solve_elliptic(opt, true);
    if (heat->parsed()) return cmd_solve_heat(opt);
    if (wave->parsed()) return cmd_solve_wave(opt);
    if (metric->parsed()) return cmd_metric(opt);
    if (verify->parsed()) return cmd_verify(opt);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const graphpde::Error& e) {
    nlohmann::json err;
    err["error"] = e.code();
    err["message"] = e.what();
    std::cerr << err.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = "internal";
    err["message"] = e.what();
    std::cerr << err.dump() << '\n';
    return 1;
  }
  return 0;
}
