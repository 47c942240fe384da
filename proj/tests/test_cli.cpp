#include <doctest.h>

#include "irm/cli.hpp"
#include "irm/trace.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliRun cli(std::initializer_list<std::string> args) {
  std::vector<std::string> owned = {"irm"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(owned.size());
  for (const std::string& a : owned) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun run;
  run.exit_code = irm::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  run.out = out.str();
  run.err = err.str();
  return run;
}

struct ScratchFile {
  fs::path path;
  explicit ScratchFile(const std::string& name) : path(fs::temp_directory_path() / name) {}
  ~ScratchFile() {
    std::error_code ec;
    fs::remove(path, ec);
  }
  std::string str() const { return path.string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("solve reports a two-step converged run on the 2x2 diagnostic problem") {
  const CliRun run = cli({"solve", "--problem", "diagonal:1,1e4", "--method", "cg", "--zero-wall"});
  CHECK(run.exit_code == 0);
  CHECK(run.err.empty());
  CHECK(contains(run.out, "method=cg"));
  CHECK(contains(run.out, "n=2"));
  CHECK(contains(run.out, "status=converged"));
  CHECK(contains(run.out, "iters=2"));
  CHECK(contains(run.out, "wall_ms=0.000"));
}

TEST_CASE("every IRM-CG method spelling is accepted") {
  for (const std::string& method : {"irm-cg-basic", "irm-cg-fast", "irm:r,p"}) {
    const CliRun run = cli({"solve", "--problem", "diagonal:geom:1:100:10", "--method", method});
    CHECK(run.exit_code == 0);
    CHECK(contains(run.out, "method=" + method));
    CHECK(contains(run.out, "status=converged"));
  }
}

TEST_CASE("a missing matrix file exits with the file error code") {
  const CliRun run = cli({"solve", "--problem", "mtx:/nonexistent/never_there.mtx", "--method", "cg"});
  CHECK(run.exit_code == 66);
  CHECK(!run.err.empty());
}

TEST_CASE("usage mistakes exit with the usage code") {
  CHECK(cli({"solve", "--problem", "diagonal:1,2", "--method", "cg", "--no-such-flag"}).exit_code == 64);
  CHECK(cli({"solve", "--problem", "diagonal:1,2", "--method", "sor"}).exit_code == 64);
  CHECK(cli({"solve", "--problem", "tridiagonal:5", "--method", "cg"}).exit_code == 64);
  CHECK(cli({"solve", "--problem", "diagonal:1,2", "--method", "irm:bogus"}).exit_code == 64);
  CHECK(cli({"solve", "--problem", "diagonal:1,2", "--method", "irm:r,,p"}).exit_code == 64);
  CHECK(cli({"solve", "--problem", "diagonal:1,2", "--method", "cg", "--omega", "2.5"}).exit_code == 64);
  CHECK(cli({"bench", "--problem", "diagonal:1,2", "--methods", "cg"}).exit_code == 64);
  CHECK(cli({"stability", "--kappas", ","}).exit_code == 64);
  CHECK(cli({}).exit_code == 64);  // a subcommand is required
}

TEST_CASE("help is printed on request and is not an error") {
  const CliRun run = cli({"--help"});
  CHECK(run.exit_code == 0);
  CHECK(contains(run.out, "solve"));
  CHECK(contains(run.out, "bench"));
  CHECK(contains(run.out, "stability"));
}

TEST_CASE("the cube benchmark problem is assembled at its documented size") {
  const CliRun run = cli({"solve", "--problem", "fem-cube:ne=2", "--method", "irm-cg-fast"});
  CHECK(run.exit_code == 0);
  CHECK(contains(run.out, "n=81"));
  CHECK(contains(run.out, "status=converged"));
}

TEST_CASE("an iteration budget that is too small exits with the max-iterations code") {
  const CliRun run = cli({"solve", "--problem", "diagonal:geom:1:1e8:60", "--method", "cg", "--n-max", "3"});
  CHECK(run.exit_code == 2);
  CHECK(contains(run.out, "status=max-iterations"));
}

TEST_CASE("trace files are written in both formats and parse back") {
  ScratchFile csv("irm_cli_trace.csv");
  const CliRun run_csv = cli({"solve", "--problem", "diagonal:geom:1:1e4:30", "--method", "irm-cg-fast",
                              "--trace-out", csv.str(), "--zero-wall"});
  REQUIRE(run_csv.exit_code == 0);
  std::ifstream csv_in(csv.str());
  const irm::ConvergenceTrace from_csv = irm::read_trace_csv(csv_in);
  CHECK(from_csv.method == "irm-cg-fast");
  CHECK(from_csv.status == irm::SolveStatus::converged);
  REQUIRE(!from_csv.records.empty());
  CHECK(from_csv.records[0].rel_res == 1.0);
  CHECK(!from_csv.records[0].energy.has_value());

  ScratchFile json("irm_cli_trace.json");
  const CliRun run_json = cli({"solve", "--problem", "diagonal:geom:1:1e4:30", "--method", "irm-cg-fast",
                               "--trace-out", json.str(), "--format", "json", "--trace-level", "full",
                               "--zero-wall"});
  REQUIRE(run_json.exit_code == 0);
  std::ifstream json_in(json.str());
  const irm::ConvergenceTrace from_json = irm::read_trace_json(json_in);
  CHECK(from_json.status == irm::SolveStatus::converged);
  REQUIRE(!from_json.records.empty());
  CHECK(from_json.records.back().energy.has_value());
  CHECK(from_json.records.back().wall_nanos == 0);
}

TEST_CASE("bench output is reproducible byte for byte with frozen wall clocks") {
  const auto args = {std::string("bench"), std::string("--problem"), std::string("random-spd:n=60,kappa=1e3"),
                     std::string("--methods"), std::string("cg,irm-cg-basic,irm-cg-fast"),
                     std::string("--seed"), std::string("11"), std::string("--zero-wall")};
  const CliRun first = cli(args);
  const CliRun second = cli(args);
  CHECK(first.exit_code == 0);
  CHECK(first.out == second.out);
  CHECK(contains(first.out, "method,iters,status,rel_res,spmv,spmv_total,wall_ms"));
  CHECK(contains(first.out, "problem=random-spd:n=60,kappa=1e3 n=60"));
  // one row per method
  CHECK(contains(first.out, "\ncg,"));
  CHECK(contains(first.out, "\nirm-cg-basic,"));
  CHECK(contains(first.out, "\nirm-cg-fast,"));
}

TEST_CASE("the stability sweep writes its grid and cross-checks itself") {
  ScratchFile out_file("irm_cli_sweep.csv");
  const CliRun run = cli({"stability", "--kappas", "10,100", "--points", "21", "--out", out_file.str()});
  REQUIRE(run.exit_code == 0);
  CHECK(contains(run.out, "wrote 42 rows"));
  const std::string text = slurp(out_file.str());
  CHECK(contains(text, "kappa,delta,err_x1,err_x2"));
  CHECK(contains(text, "# verification_corners=4"));
  const auto pos = text.find("# verification_max_rel_dev=");
  REQUIRE(pos != std::string::npos);
  const double dev = std::strtod(text.c_str() + pos + 27, nullptr);
  CHECK(dev >= 0.0);
  CHECK(dev <= 1e-9);

  // Without --out the same CSV goes to stdout.
  const CliRun piped = cli({"stability", "--kappas", "10", "--points", "5"});
  CHECK(piped.exit_code == 0);
  CHECK(contains(piped.out, "kappa,delta,err_x1,err_x2"));
  int data_rows = 0;
  std::istringstream lines(piped.out);
  std::string line;
  while (std::getline(lines, line))
    if (!line.empty() && line[0] != '#' && line[0] != 'k') ++data_rows;
  CHECK(data_rows == 5);
}
