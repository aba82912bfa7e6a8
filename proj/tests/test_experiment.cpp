// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <regex>

#include "mor/experiment.hpp"

using namespace mor;
using nlohmann::json;

namespace
{

std::string read_file(const std::filesystem::path &p)
{
  std::ifstream in(p);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

// Strips the wall-clock column from a convergence CSV so runs can be
// compared bitwise on their numeric content.
std::string drop_wall_ms(const std::string &csv)
{
  std::string out;
  size_t pos = 0;
  while (pos < csv.size())
  {
    size_t nl = csv.find('\n', pos);
    if (nl == std::string::npos)
      nl = csv.size();
    std::string line = csv.substr(pos, nl - pos);
    const size_t comma = line.rfind(',');
    out += line.substr(0, comma);
    out += '\n';
    pos = nl + 1;
  }
  return out;
}

ExperimentConfig tiny_config()
{
  ExperimentConfig cfg;
  cfg.problem.name = "laplace-tiny";
  cfg.problem.kind = ProblemSpec::Kind::EllipticFD;
  cfg.problem.elliptic.grid = 8;
  cfg.r = 3;
  return cfg;
}

} // namespace

TEST_CASE("method names round trip")
{
  for (Method m : {Method::IRKA, Method::RIRKA, Method::TRIRKA})
    CHECK(method_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(method_from_string("bogus"), Error);
}

TEST_CASE("config JSON round trip preserves every field")
{
  ExperimentConfig cfg = tiny_config();
  cfg.methods = {Method::RIRKA, Method::TRIRKA};
  cfg.tol = 1e-9;
  cfg.tol_inner = 1e-10;
  cfg.tau = 4;
  cfg.init = "random";
  cfg.seed = 17;
  cfg.compute_sigma = true;
  cfg.problem.siso_select = {1, 0};
  const json j1 = config_to_json(cfg);
  const ExperimentConfig back = config_from_json(j1);
  CHECK(config_to_json(back) == j1);
  CHECK(back.r == 3);
  CHECK(back.tol == 1e-9);
  REQUIRE(back.tol_inner.has_value());
  CHECK(*back.tol_inner == 1e-10);
  CHECK(back.methods == cfg.methods);
  CHECK(back.init == "random");
  REQUIRE(back.problem.siso_select.has_value());
  CHECK(back.problem.siso_select->first == 1);
}

TEST_CASE("config validation rejects empty method lists")
{
  json j = config_to_json(tiny_config());
  j["methods"] = json::array();
  CHECK_THROWS_AS(config_from_json(j), Error);
  j = config_to_json(tiny_config());
  j["problem"]["kind"] = "wat";
  CHECK_THROWS_AS(config_from_json(j), Error);
}

TEST_CASE("load_problem honors siso_select")
{
  ProblemSpec spec = tiny_config().problem;
  CHECK(load_problem(spec).m() == 2);
  spec.siso_select = {0, 1};
  DescriptorSystem sys = load_problem(spec);
  CHECK(sys.m() == 1);
  CHECK(sys.p() == 1);
}

TEST_CASE("run_experiment runs all methods and emits the artifact set")
{
  namespace fs = std::filesystem;
  ExperimentConfig cfg = tiny_config();
  cfg.compute_sigma = true;
  const fs::path dir = fs::temp_directory_path() / "mor_exp_artifacts";
  fs::remove_all(dir);
  cfg.output_dir = dir.string();

  ExperimentResult res = run_experiment(cfg);
  REQUIRE(res.outcomes.size() == 3);
  CHECK(res.all_ok());
  for (const auto &o : res.outcomes)
    CHECK(o.record.status == Termination::Converged);

  for (const char *name : {"IRKA", "RIRKA", "TRIRKA"})
  {
    CHECK(fs::exists(dir / (std::string(name) + "_convergence.csv")));
    CHECK(fs::exists(dir / (std::string(name) + "_shifts.json")));
  }
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(fs::exists(dir / "summary.csv"));
  CHECK(fs::exists(dir / "comparison.txt"));
  CHECK(fs::exists(dir / "config.json"));

  // Summary xi_lin equals the recorded totals; shifts JSON parses.
  const json summary = json::parse(read_file(dir / "summary.json"));
  REQUIRE(summary.size() == 3);
  for (size_t i = 0; i < 3; ++i)
    CHECK(summary[i]["xi_lin"].get<long>() ==
          res.outcomes[i].record.total_solves);
  const json shifts = json::parse(read_file(dir / "IRKA_shifts.json"));
  CHECK(shifts["shifts"].size() == 3);

  // Convergence CSV has the contracted header and one line per iteration.
  const std::string csv = read_file(dir / "IRKA_convergence.csv");
  CHECK(csv.rfind("iter,chi,cum_solves,basis_dim,inner_iters,wall_ms\n", 0) ==
        0);
  const long rows = std::count(csv.begin(), csv.end(), '\n') - 1;
  CHECK(rows == res.outcomes[0].record.iterations());

  // Re-running from the emitted config reproduces all counts bitwise
  // (wall time excluded).
  const fs::path dir2 = fs::temp_directory_path() / "mor_exp_artifacts2";
  fs::remove_all(dir2);
  ExperimentConfig cfg2 =
      config_from_json(json::parse(read_file(dir / "config.json")));
  cfg2.output_dir = dir2.string();
  run_experiment(cfg2);
  for (const char *name : {"IRKA", "RIRKA", "TRIRKA"})
  {
    const std::string f = std::string(name) + "_convergence.csv";
    CHECK(drop_wall_ms(read_file(dir / f)) ==
          drop_wall_ms(read_file(dir2 / f)));
    const std::string s = std::string(name) + "_shifts.json";
    CHECK(read_file(dir / s) == read_file(dir2 / s));
  }
}

TEST_CASE("per-method failures are isolated")
{
  ExperimentConfig cfg = tiny_config();
  cfg.problem.elliptic.grid = 3; // n = 9
  cfg.r = 5;                     // 2r > n: R-IRKA methods must fail
  ExperimentResult res = run_experiment(cfg);
  REQUIRE(res.outcomes.size() == 3);
  CHECK(res.outcomes[0].error.empty()); // IRKA still fine (r <= n)
  CHECK_FALSE(res.outcomes[1].error.empty());
  CHECK_FALSE(res.outcomes[2].error.empty());
  CHECK(res.outcomes[1].record.status == Termination::Error);
  CHECK_FALSE(res.all_ok());
}

TEST_CASE("run_experiment validates the configuration")
{
  ExperimentConfig cfg = tiny_config();
  cfg.methods.clear();
  CHECK_THROWS_AS(run_experiment(cfg), Error);
  cfg = tiny_config();
  cfg.r = 0;
  CHECK_THROWS_AS(run_experiment(cfg), Error);
}

TEST_CASE("compare_report and compare_csv render every method")
{
  ExperimentConfig cfg = tiny_config();
  ExperimentResult res = run_experiment(cfg);
  const std::string table = compare_report(res.outcomes);
  CHECK(table.find("IRKA") != std::string::npos);
  CHECK(table.find("TRIRKA") != std::string::npos);
  CHECK(table.find("converged") != std::string::npos);
  const std::string csv = compare_csv(res.outcomes);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4); // header + 3 rows
  CHECK_THROWS_AS(compare_report({}), Error);

  // Single-record table renders one column.
  const std::string one = compare_report({res.outcomes[0]});
  CHECK(one.find("RIRKA") == std::string::npos);
}
