#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("rpzf_cli_tests_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path scratch_file(const std::string& name) { return scratch_dir() / name; }

CliRun run_cli(const std::string& args, const std::string& env = "SOURCE_DATE_EPOCH=0") {
  static int counter = 0;
  fs::path out = scratch_file("stdout_" + std::to_string(counter) + ".txt");
  fs::path err = scratch_file("stderr_" + std::to_string(counter) + ".txt");
  ++counter;
  std::string cmd = env + " \"" RPZF_CLI_PATH "\" " + args + " > " + out.string() + " 2> " + err.string();
  int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& body) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(body);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

// cell lookup by header name, data rows indexed from 0
std::string csv_cell(const std::vector<std::vector<std::string>>& rows, std::size_t row, const std::string& col) {
  REQUIRE(!rows.empty());
  for (std::size_t c = 0; c < rows[0].size(); ++c)
    if (rows[0][c] == col) {
      REQUIRE(row + 1 < rows.size());
      REQUIRE(c < rows[row + 1].size());
      return rows[row + 1][c];
    }
  FAIL("column not found: " + col);
  return {};
}

}  // namespace

TEST_CASE("help and version") {
  CliRun help = run_cli("--help");
  CHECK(help.code == 0);
  for (const char* sub : {"analyze", "critical-p", "simulate", "threshold", "meanfield", "pmf"})
    CHECK(help.out.find(sub) != std::string::npos);
  CliRun version = run_cli("--version");
  CHECK(version.code == 0);
  CHECK(version.out.find("0.1.0") != std::string::npos);
  CHECK(run_cli("").code == 2);
}

TEST_CASE("analyze emits exact absorption statistics") {
  // the triangle's critical reversion probability is exactly 3/5, so the
  // die-out probability from one blue vertex at p = 0.6 is 1/2
  CliRun r = run_cli("analyze --family complete:3 --p 0.6 --variant darpzf");
  REQUIRE(r.code == 0);
  auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);  // header + states 1, 2
  CHECK(rows[0][0] == "p");
  CHECK(csv_cell(rows, 0, "state_index") == "1");
  CHECK(csv_cell(rows, 0, "blue_count") == "1");
  double c_die = std::stod(csv_cell(rows, 0, "c_die"));
  double c_force = std::stod(csv_cell(rows, 0, "c_force"));
  CHECK_THAT(c_die, Catch::Matchers::WithinAbs(0.5, 1e-9));
  CHECK_THAT(c_die + c_force, Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK(std::stod(csv_cell(rows, 0, "t")) > 1.0);
  CHECK(std::stod(csv_cell(rows, 0, "residual")) < 1e-12);
}

TEST_CASE("p-grid endpoints are inclusive") {
  CliRun r = run_cli("analyze --family complete:3 --p-grid 0.1:0.3:0.1 --variant sarpzf");
  REQUIRE(r.code == 0);
  auto rows = parse_csv(r.out);
  // 3 grid points x 3 transient states (sarpzf keeps the all-blue state)
  REQUIRE(rows.size() == 10);
  CHECK(std::stod(rows[1][0]) == Catch::Approx(0.1).margin(1e-12));
  CHECK(std::stod(rows[9][0]) == Catch::Approx(0.3).margin(1e-12));
}

TEST_CASE("family and edge-list routes produce identical tables") {
  fs::path edges = scratch_file("k3.edges");
  {
    std::ofstream f(edges);
    f << "# complete graph on three vertices\n3\n0 1\n0 2\n1 2\n";
  }
  CliRun family = run_cli("analyze --family complete:3 --space full --p 0.4");
  CliRun file = run_cli("analyze --edge-list " + edges.string() + " --p 0.4");
  REQUIRE(family.code == 0);
  REQUIRE(file.code == 0);
  CHECK(family.out == file.out);
}

TEST_CASE("simulate writes deterministic files with manifests") {
  fs::path out = scratch_file("sim.csv");
  std::string args = "simulate --family complete:8 --start 0 --p 0.3 --trials 2000 --seed 42 --out " + out.string();
  CliRun first = run_cli(args, "SOURCE_DATE_EPOCH=12345");
  REQUIRE(first.code == 0);
  std::string body1 = slurp(out);
  std::string manifest1 = slurp(out.string() + ".manifest.json");
  CliRun second = run_cli(args, "SOURCE_DATE_EPOCH=12345");
  REQUIRE(second.code == 0);
  CHECK(slurp(out) == body1);
  CHECK(slurp(out.string() + ".manifest.json") == manifest1);

  json manifest = json::parse(manifest1);
  CHECK(manifest["command"] == "simulate");
  CHECK(manifest["tool"] == "rpzf");
  CHECK(manifest["timestamp"] == "1970-01-01T03:25:45Z");
  CHECK(manifest["outputs"][0] == out.string());
  CHECK(manifest["parameters"]["seed"] == 42);

  auto rows = parse_csv(body1);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == "p");
  CHECK(rows[0][1] == "die_out_fraction");
  CHECK(csv_cell(rows, 0, "trials") == "2000");
  CHECK(csv_cell(rows, 0, "variant") == "darpzf");
  double frac = std::stod(csv_cell(rows, 0, "die_out_fraction"));
  CHECK(frac >= 0.0);
  CHECK(frac <= 1.0);
}

TEST_CASE("simulate respects the thread flag without changing results") {
  std::string base = "simulate --family cycle:6 --start 0,3 --p 0.5 --trials 3000 --seed 9";
  CliRun one = run_cli(base + " --threads 1");
  CliRun four = run_cli(base + " --threads 4");
  REQUIRE(one.code == 0);
  REQUIRE(four.code == 0);
  CHECK(one.out == four.out);
}

TEST_CASE("json output embeds the manifest") {
  CliRun r = run_cli("pmf --n 5 --b 2 --p 0.5 --variant sarpzf --format json");
  REQUIRE(r.code == 0);
  json payload = json::parse(r.out);
  CHECK(payload["manifest"]["command"] == "pmf");
  CHECK(payload["manifest"]["timestamp"] == "1970-01-01T00:00:00Z");
  REQUIRE(payload["columns"].size() == 2);
  REQUIRE(payload["rows"].size() == 6);
  double total = 0.0;
  for (const auto& row : payload["rows"]) total += row[1].get<double>();
  CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-12));
  // repeated runs are byte-identical
  CliRun again = run_cli("pmf --n 5 --b 2 --p 0.5 --variant sarpzf --format json");
  CHECK(again.out == r.out);
}

TEST_CASE("critical-p matches the known complete-graph value") {
  CliRun r = run_cli("critical-p --family complete:7 --state 1 --scan");
  REQUIRE(r.code == 0);
  auto rows = parse_csv(r.out);
  CHECK_THAT(std::stod(csv_cell(rows, 0, "p_critical")), Catch::Matchers::WithinAbs(0.427101, 1e-5));
  CHECK_THAT(std::stod(csv_cell(rows, 0, "die_probability")), Catch::Matchers::WithinAbs(0.5, 1e-7));
  CHECK(csv_cell(rows, 0, "sign_changes") == "1");
}

TEST_CASE("threshold sweeps through the cli") {
  CliRun r = run_cli(
      "threshold --family star --metric expectation-gap --n-grid 100000,1000000 --p 0.5 "
      "--star-offset constant --star-c 2");
  REQUIRE(r.code == 0);
  auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"n", "b_n", "metric_value"});
  CHECK_THAT(std::stod(csv_cell(rows, 1, "metric_value")), Catch::Matchers::WithinAbs(3.0, 1e-3));
  CHECK(run_cli("threshold --family bipartite --metric expectation-gap --n-grid 100").code == 3);
}

TEST_CASE("meanfield trajectories through the cli") {
  CliRun r = run_cli("meanfield --family complete:4 --model gomez --beta 0.3 --p 0.2 --horizon 5 --init-blue 0");
  REQUIRE(r.code == 0);
  auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == std::vector<std::string>{"step", "density"});
  CHECK(rows[1][0] == "0");
  CHECK_THAT(std::stod(rows[1][1]), Catch::Matchers::WithinAbs(0.25, 1e-12));

  CliRun wide = run_cli(
      "meanfield --family path:3 --model sarpzf --p 0.4 --horizon 2 --init-density 0.5 --per-vertex");
  REQUIRE(wide.code == 0);
  auto wrows = parse_csv(wide.out);
  REQUIRE(wrows.size() == 4);
  CHECK(wrows[0] == std::vector<std::string>{"step", "density", "p_0", "p_1", "p_2"});

  CHECK(run_cli("meanfield --family complete:4 --model ahn --init-blue 0 --init-density 0.5").code == 2);
  CHECK(run_cli("meanfield --family complete:13 --model sarpzf --p 0.5").code == 4);
  CHECK(run_cli("meanfield --family complete:13 --model sarpzf --p 0.5 --exact-cap 13").code == 0);
}

TEST_CASE("error taxonomy maps to exit codes") {
  // 2: bad usage or unparseable input
  CHECK(run_cli("analyze --family complete:3 --p 0.5 --no-such-flag").code == 2);
  CHECK(run_cli("analyze --family complete:3").code == 2);                      // no p source
  CHECK(run_cli("analyze --family complete:3 --p 0.5 --p-grid 0.1:0.2:0.1").code == 2);
  CHECK(run_cli("analyze --family complete:3 --edge-list x.txt --p 0.5").code == 2);
  CHECK(run_cli("analyze --family complete --p 0.5").code == 2);                // missing size
  CHECK(run_cli("analyze --edge-list /nonexistent/file.edges --p 0.5").code == 2);
  // 3: domain violations
  CHECK(run_cli("analyze --family complete:3 --p 1.5").code == 3);
  CHECK(run_cli("analyze --family path:4 --space collapsed --p 0.5").code == 3);
  CHECK(run_cli("critical-p --family complete:3 --state 0").code == 3);
  // 4: size limits
  CHECK(run_cli("analyze --family complete:20 --space full --p 0.5").code == 4);
}

TEST_CASE("collapsed and full analyses agree through the cli") {
  CliRun coll = run_cli("analyze --family complete:5 --space collapsed --p 0.45");
  CliRun full = run_cli("analyze --family complete:5 --space full --p 0.45");
  REQUIRE(coll.code == 0);
  REQUIRE(full.code == 0);
  auto crows = parse_csv(coll.out);
  auto frows = parse_csv(full.out);
  // full state 1 is a single-blue coloring; collapsed state 1 is count 1
  CHECK_THAT(std::stod(csv_cell(frows, 0, "t")),
             Catch::Matchers::WithinAbs(std::stod(csv_cell(crows, 0, "t")), 1e-9));
  CHECK_THAT(std::stod(csv_cell(frows, 0, "c_die")),
             Catch::Matchers::WithinAbs(std::stod(csv_cell(crows, 0, "c_die")), 1e-9));
}
