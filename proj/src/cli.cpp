#include "irm/cli.hpp"

#include "irm/engine.hpp"
#include "irm/problems.hpp"
#include "irm/solvers.hpp"
#include "irm/stability.hpp"
#include "irm/trace.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace irm {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitMaxIterations = 2;
constexpr int kExitUsage = 64;
constexpr int kExitFile = 66;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}

long long to_ll(const std::string& s) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) throw std::invalid_argument("bad integer: " + s);
  return v;
}

struct Problem {
  SparseSpdMatrix A;
  Vec b;
  std::string name;
};

Problem make_problem(const std::string& spec, const std::string& rhs_path, uint64_t seed) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);

  Problem problem;
  problem.name = spec;
  if (kind == "mtx") {
    if (rest.empty()) throw std::invalid_argument("mtx needs a path, e.g. mtx:matrix.mtx");
    problem.A = load_matrix_market(rest);
    problem.b = Vec::Ones(problem.A.rows());
  } else if (kind == "diagonal") {
    if (rest.rfind("geom:", 0) == 0) {
      const auto parts = split(rest.substr(5), ':');
      if (parts.size() != 3) throw std::invalid_argument("diagonal:geom:FIRST:LAST:COUNT");
      problem.A = gen_diagonal(
          geometric_spectrum(to_double(parts[0]), to_double(parts[1]), static_cast<int>(to_ll(parts[2]))));
    } else {
      std::vector<double> spectrum;
      for (const auto& cell : split(rest, ',')) spectrum.push_back(to_double(cell));
      problem.A = gen_diagonal(spectrum);
    }
    problem.b = Vec::Ones(problem.A.rows());
  } else if (kind == "laplacian3d") {
    problem.A = gen_laplacian3d(static_cast<int>(to_ll(rest)));
    problem.b = Vec::Ones(problem.A.rows());
  } else if (kind == "fem-cube") {
    FemCubeSpec cube;
    for (const auto& cell : split(rest, ',')) {
      if (cell.empty()) continue;
      const auto eq = cell.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("fem-cube options are key=value: " + cell);
      const std::string key = cell.substr(0, eq);
      const std::string value = cell.substr(eq + 1);
      if (key == "ne")
        cube.elements_per_edge = static_cast<int>(to_ll(value));
      else if (key == "spring")
        cube.spring_scale = to_double(value);
      else if (key == "e")
        cube.youngs_modulus = to_double(value);
      else if (key == "nu")
        cube.poisson_ratio = to_double(value);
      else if (key == "load")
        cube.load_magnitude = to_double(value);
      else
        throw std::invalid_argument("unknown fem-cube option: " + key);
    }
    auto [A, b] = gen_fem_cube(cube);
    problem.A = std::move(A);
    problem.b = std::move(b);
  } else if (kind == "random-spd") {
    Index n = 0;
    double kappa = 0.0;
    for (const auto& cell : split(rest, ',')) {
      if (cell.empty()) continue;
      const auto eq = cell.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("random-spd options are key=value: " + cell);
      const std::string key = cell.substr(0, eq);
      const std::string value = cell.substr(eq + 1);
      if (key == "n")
        n = static_cast<Index>(to_ll(value));
      else if (key == "kappa")
        kappa = to_double(value);
      else
        throw std::invalid_argument("unknown random-spd option: " + key);
    }
    if (n <= 0 || kappa < 1.0) throw std::invalid_argument("random-spd needs n=N,kappa=K (n>=1, kappa>=1)");
    problem.A = gen_random_spd(n, kappa, seed);
    problem.b = Vec::Ones(problem.A.rows());
  } else {
    throw std::invalid_argument("unknown problem kind: " + kind);
  }

  if (!rhs_path.empty()) {
    problem.b = load_rhs_array(rhs_path);
    if (problem.b.size() != problem.A.rows())
      throw FormatError("right-hand side length does not match the matrix");
  }
  return problem;
}

struct CommonFlags {
  std::string problem;
  std::string rhs;
  double eps = 1e-10;
  long long n_max = 0;  // 0 means 20·n
  long long i_max = 50;
  std::vector<double> omega;
  double pivot_tol = 1e-12;
  int m_max = 8;
  uint64_t seed = 42;
  std::string trace_out;
  std::string format = "csv";
  std::string trace_level = "light";
  bool zero_wall = false;
  int restart_period = 0;
  int refresh_every = 0;
};

SolveConfig make_config(const CommonFlags& flags, Index n) {
  SolveConfig config;
  config.eps = flags.eps;
  config.n_max = flags.n_max > 0 ? static_cast<Index>(flags.n_max) : 20 * n;
  config.i_max = static_cast<Index>(flags.i_max);
  config.omega = flags.omega;
  config.pivot_tol = flags.pivot_tol;
  config.m_max = flags.m_max;
  if (flags.trace_level == "light")
    config.trace_level = TraceLevel::light;
  else if (flags.trace_level == "full")
    config.trace_level = TraceLevel::full;
  else
    throw std::invalid_argument("trace level must be light or full");
  validate(config);
  return config;
}

SolveResult dispatch(const std::string& method, const Problem& problem, const SolveConfig& config,
                     const CommonFlags& flags) {
  const Vec x0 = Vec::Zero(problem.A.rows());
  if (method == "cg") {
    if (flags.refresh_every > 0) return cg_with_refresh(problem.A, problem.b, x0, config, flags.refresh_every);
    return cg_solve(problem.A, problem.b, x0, config, flags.restart_period);
  }
  if (method == "irm-cg-basic") return irm_cg_solve(problem.A, problem.b, x0, config, IrmCgVariant::basic);
  if (method == "irm-cg-fast") return irm_cg_solve(problem.A, problem.b, x0, config, IrmCgVariant::fast);
  if (method.rfind("irm:", 0) == 0)
    return irm_solve(problem.A, problem.b, x0, parse_generator_specs(method.substr(4)), config);
  throw std::invalid_argument("unknown method: " + method +
                              " (expected cg, irm-cg-basic, irm-cg-fast, or irm:GENERATORS)");
}

void apply_zero_wall(ConvergenceTrace& trace) {
  for (TraceRecord& rec : trace.records) rec.wall_nanos = 0;
}

void write_trace_file(const std::string& path, const std::string& format, const ConvergenceTrace& trace) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open file for writing: " + path);
  if (format == "csv")
    write_trace_csv(out, trace);
  else if (format == "json")
    write_trace_json(out, trace);
  else
    throw std::invalid_argument("format must be csv or json");
}

std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& c : out)
    if (c == ':' || c == ',' || c == '/') c = '-';
  return out;
}

int exit_code_of(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return kExitOk;
    case SolveStatus::max_iterations: return kExitMaxIterations;
    default: return kExitError;
  }
}

void print_summary(std::ostream& out, const Problem& problem, const ConvergenceTrace& trace) {
  const long long iters = trace.records.empty() ? 0 : trace.records.back().iter;
  const double wall_ms =
      trace.records.empty() ? 0.0 : static_cast<double>(trace.records.back().wall_nanos) / 1e6;
  char rel[32], wall[32];
  std::snprintf(rel, sizeof rel, "%.6e", trace.final_rel_res);
  std::snprintf(wall, sizeof wall, "%.3f", wall_ms);
  out << "method=" << trace.method << " n=" << problem.A.rows() << " status=" << to_string(trace.status)
      << " iters=" << iters << " rel_res=" << rel << " spmv=" << trace.spmv << " spmv_total=" << trace.spmv_total
      << " wall_ms=" << wall;
  if (trace.status == SolveStatus::error) out << " error=\"" << trace.error_text << "\"";
  out << "\n";
}

int run_solve(const CommonFlags& flags, const std::string& method, std::ostream& out) {
  const Problem problem = make_problem(flags.problem, flags.rhs, flags.seed);
  const SolveConfig config = make_config(flags, problem.A.rows());
  SolveResult result = dispatch(method, problem, config, flags);
  if (flags.zero_wall) apply_zero_wall(result.trace);
  if (!flags.trace_out.empty()) write_trace_file(flags.trace_out, flags.format, result.trace);
  print_summary(out, problem, result.trace);
  return exit_code_of(result.status);
}

int run_bench(const CommonFlags& flags, const std::vector<std::string>& methods, std::ostream& out) {
  if (methods.size() < 2) throw std::invalid_argument("bench needs at least two methods");
  const Problem problem = make_problem(flags.problem, flags.rhs, flags.seed);
  const SolveConfig config = make_config(flags, problem.A.rows());
  out << "problem=" << problem.name << " n=" << problem.A.rows() << "\n";
  out << "method,iters,status,rel_res,spmv,spmv_total,wall_ms\n";
  int exit_code = kExitOk;
  for (const std::string& method : methods) {
    SolveResult result = dispatch(method, problem, config, flags);
    if (flags.zero_wall) apply_zero_wall(result.trace);
    if (!flags.trace_out.empty())
      write_trace_file(flags.trace_out + "_" + sanitize(method) + "." + flags.format, flags.format, result.trace);
    const long long iters = result.trace.records.empty() ? 0 : result.trace.records.back().iter;
    const double wall_ms =
        result.trace.records.empty() ? 0.0 : static_cast<double>(result.trace.records.back().wall_nanos) / 1e6;
    char rel[32], wall[32];
    std::snprintf(rel, sizeof rel, "%.6e", result.trace.final_rel_res);
    std::snprintf(wall, sizeof wall, "%.3f", wall_ms);
    out << result.trace.method << ',' << iters << ',' << to_string(result.trace.status) << ',' << rel << ','
        << result.trace.spmv << ',' << result.trace.spmv_total << ',' << wall << "\n";
    exit_code = std::max(exit_code, exit_code_of(result.status));
  }
  return exit_code;
}

int run_stability(const std::vector<double>& kappas, const DeltaGrid& grid, const std::string& out_path,
                  std::ostream& out) {
  if (kappas.empty()) throw std::invalid_argument("kappa list must be non-empty");
  const std::vector<SweepRow> rows = sweep_fig1(kappas, grid);

  // Cross-check the closed form against the simulated disturbed runs at the
  // grid corners.
  const double kappa_min = *std::min_element(kappas.begin(), kappas.end());
  const double kappa_max = *std::max_element(kappas.begin(), kappas.end());
  double max_rel_dev = 0.0;
  int corners = 0;
  for (double kappa : {kappa_min, kappa_max})
    for (double delta : {grid.lo, grid.hi}) {
      const Vec simulated = run_disturbed(DisturbedMethod::cg, DisturbedCase{kappa, delta});
      const Vec closed = perturbed_cg_closed_form(DisturbedCase{kappa, delta});
      const double scale = std::max(closed.cwiseAbs().maxCoeff(), 1e-300);
      max_rel_dev = std::max(max_rel_dev, (simulated - closed).cwiseAbs().maxCoeff() / scale);
      ++corners;
    }

  char dev[32];
  std::snprintf(dev, sizeof dev, "%.3e", max_rel_dev);
  const auto emit = [&](std::ostream& sink) {
    write_sweep_csv(sink, rows);
    sink << "# verification_corners=" << corners << "\n";
    sink << "# verification_max_rel_dev=" << dev << "\n";
  };
  if (!out_path.empty()) {
    std::ofstream file(out_path);
    if (!file) throw FormatError("cannot open file for writing: " + out_path);
    emit(file);
    out << "wrote " << rows.size() << " rows to " << out_path << "; verification max relative deviation " << dev
        << " over " << corners << " corners\n";
  } else {
    emit(out);
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iterated Ritz Method solvers: IRM, IRM-CG, and a CG baseline"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string method;
  std::vector<std::string> methods;
  std::vector<double> kappas = {1e1, 1e2, 1e4};
  DeltaGrid grid;
  std::string stability_out;

  const auto add_common = [&flags](CLI::App* cmd, bool with_problem) {
    if (with_problem) {
      cmd->add_option("--problem", flags.problem,
                      "Problem spec: mtx:PATH | diagonal:V1,V2,... | diagonal:geom:FIRST:LAST:COUNT | "
                      "laplacian3d:G | fem-cube:ne=N[,spring=S,e=E,nu=NU,load=L] | random-spd:n=N,kappa=K")
          ->required();
      cmd->add_option("--rhs", flags.rhs, "Right-hand side as a Matrix Market array file");
    }
    cmd->add_option("--eps", flags.eps, "Relative residual tolerance (default 1e-10)");
    cmd->add_option("--n-max", flags.n_max, "Maximum steps; 0 means 20*n (default 0)");
    cmd->add_option("--i-max", flags.i_max, "Refresh period of the fast recursive path (default 50)");
    cmd->add_option("--omega", flags.omega, "Relaxation factor sequence, each in (0,2); last value repeats")
        ->expected(-1);
    cmd->add_option("--pivot-tol", flags.pivot_tol, "Relative pivot-drop tolerance (default 1e-12)");
    cmd->add_option("--m-max", flags.m_max, "Maximum subspace dimension (default 8)");
    cmd->add_option("--seed", flags.seed, "Seed for random problems (default 42)");
    cmd->add_option("--trace-out", flags.trace_out, "Trace output path (bench: prefix, one file per method)");
    cmd->add_option("--format", flags.format, "Trace format: csv | json (default csv)");
    cmd->add_option("--trace-level", flags.trace_level, "light | full (full records energy; default light)");
    cmd->add_flag("--zero-wall", flags.zero_wall, "Zero wall-clock fields in traces (reproducible files)");
  };

  CLI::App* solve = app.add_subcommand("solve", "Solve one problem with one method");
  add_common(solve, true);
  solve->add_option("--method", method, "cg | irm-cg-basic | irm-cg-fast | irm:GEN1,GEN2,...")->required();
  solve->add_option("--restart-period", flags.restart_period, "CG restart period (0 disables)");
  solve->add_option("--refresh-every", flags.refresh_every,
                    "With --method cg: replace every k-th step by one basic IRM-CG step");

  CLI::App* bench = app.add_subcommand("bench", "Run several methods on one problem");
  add_common(bench, true);
  bench->add_option("--methods", methods, "Comma-separated list of at least two methods")
      ->required()
      ->delimiter(',');

  CLI::App* stability = app.add_subcommand("stability", "Disturbed-step sweep of the 2x2 diagnostic system");
  stability->add_option("--kappas", kappas, "Condition numbers (default 1e1,1e2,1e4)")->delimiter(',');
  stability->add_option("--delta-lo", grid.lo, "Smallest disturbance (default -1e-2)");
  stability->add_option("--delta-hi", grid.hi, "Largest disturbance (default 1e-2)");
  stability->add_option("--points", grid.count, "Grid points (default 401)");
  stability->add_option("--out", stability_out, "Write the sweep CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return run_solve(flags, method, out);
    if (bench->parsed()) return run_bench(flags, methods, out);
    return run_stability(kappas, grid, stability_out, out);
  } catch (const FormatError& e) {
    err << e.what() << "\n";
    return kExitFile;
  } catch (const NotSymmetricError& e) {
    err << e.what() << "\n";
    return kExitFile;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace irm
