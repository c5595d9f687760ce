#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oltr/harness.hpp"

using namespace oltr;

namespace {

const char* kTinyConfig = R"({
  "n": 4, "m": 2,
  "environment": {"kind": "stochastic",
                  "alpha": [0.9, 0.7, 0.5, 0.3], "beta": [1.0, 0.5]},
  "horizon": 40, "replicates": 2, "base_seed": 5,
  "solver": {"route": "cbp"},
  "output_path": "/tmp/oltr_test_out", "record_every": 10
})";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config parsing fills every field") {
  const ExperimentConfig cfg = parse_config(kTinyConfig);
  CHECK(cfg.dims.n == 4);
  CHECK(cfg.dims.m == 2);
  CHECK(cfg.horizon == 40);
  CHECK(cfg.replicates == 2);
  CHECK(cfg.base_seed == 5);
  CHECK(cfg.solver.route == SolverRoute::kCbp);
  CHECK(cfg.record_every == 10);
  CHECK_FALSE(cfg.record_wall_time);
}

TEST_CASE("config errors carry the field name") {
  try {
    parse_config(R"({"n": 2, "m": 5, "horizon": 10,
                     "environment": {"kind": "stochastic", "alpha": [0.5, 0.4],
                                     "beta": [1.0, 0.9, 0.8, 0.7, 0.6]}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "n");
  }
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"n": 2, "m": 1, "horizon": 1,
    "environment": {"kind": "weird"}})"),
                  ConfigError);
}

TEST_CASE("preset configs resolve parameters") {
  const ExperimentConfig cfg = parse_config(R"({
    "n": 10, "m": 5, "horizon": 5,
    "environment": {"kind": "stochastic", "preset": "yandex"}})");
  CHECK(cfg.env.params.alpha.size() == 10);
  CHECK(cfg.env.params.alpha[0] == doctest::Approx(0.894));
}

TEST_CASE("single-round run emits one row") {
  ExperimentConfig cfg = parse_config(kTinyConfig);
  cfg.horizon = 1;
  cfg.replicates = 1;
  cfg.output_path = "/tmp/oltr_test_single";
  const ExperimentResult result = run_experiment(cfg);
  REQUIRE(result.traces.size() == 1);
  REQUIRE(result.traces[0].rows.size() == 1);
  CHECK(result.traces[0].rows[0].t == 1);
  CHECK(result.traces[0].rows[0].avg_reward >= 0.0);
  CHECK(result.traces[0].rows[0].avg_reward <= cfg.dims.m);
}

TEST_CASE("csv schema is stable") {
  ExperimentConfig cfg = parse_config(kTinyConfig);
  cfg.output_path = "/tmp/oltr_test_schema";
  run_experiment(cfg);
  const std::string trace = slurp("/tmp/oltr_test_schema/rep_000.csv");
  CHECK(trace.rfind("t,cum_regret,avg_reward,solver_converged,wall_ms\n", 0) == 0);
  const std::string summary = slurp("/tmp/oltr_test_schema/summary.csv");
  CHECK(summary.rfind("t,mean_cum_regret,stderr_cum_regret,mean_avg_reward,stderr_avg_reward\n",
                      0) == 0);
  // record cadence: t = 10, 20, 30, 40 -> 4 rows + header
  int lines = 0;
  for (char c : trace) lines += c == '\n' ? 1 : 0;
  CHECK(lines == 5);
}

TEST_CASE("reruns and thread counts produce byte-identical traces") {
  ExperimentConfig cfg = parse_config(kTinyConfig);
  cfg.replicates = 3;
  cfg.output_path = "/tmp/oltr_test_det_a";
  cfg.num_threads = 1;
  run_experiment(cfg);
  cfg.output_path = "/tmp/oltr_test_det_b";
  cfg.num_threads = 2;
  run_experiment(cfg);
  for (const char* name : {"rep_000.csv", "rep_001.csv", "rep_002.csv", "summary.csv"}) {
    CHECK(slurp(std::filesystem::path("/tmp/oltr_test_det_a") / name) ==
          slurp(std::filesystem::path("/tmp/oltr_test_det_b") / name));
  }
}

TEST_CASE("replicate traces are independent of batch composition") {
  ExperimentConfig cfg = parse_config(kTinyConfig);
  cfg.replicates = 2;
  cfg.output_path = "/tmp/oltr_test_perm_a";
  run_experiment(cfg);
  // replicate 1 run alone must match replicate 1 from the batch
  const ReplicateTrace alone = run_replicate(cfg, 1);
  std::ostringstream solo;
  write_trace_csv(solo, alone);
  CHECK(solo.str() == slurp("/tmp/oltr_test_perm_a/rep_001.csv"));
}

TEST_CASE("periodic environments report hindsight regret") {
  ExperimentConfig cfg = parse_config(R"({
    "n": 4, "m": 2, "horizon": 30, "replicates": 1, "base_seed": 3,
    "environment": {"kind": "periodic_swap", "phase_length": 10,
                    "alpha": [0.9, 0.7, 0.5, 0.3], "beta": [1.0, 0.5]},
    "output_path": "/tmp/oltr_test_periodic", "record_every": 10})");
  const ExperimentResult result = run_experiment(cfg);
  for (const RunRecord& row : result.traces[0].rows) {
    CHECK(row.cum_regret >= -1e-9);  // best-in-hindsight can never be beaten
  }
}

TEST_CASE("check suites run and pass") {
  for (const std::string& name : suite_names()) {
    const SuiteResult result = check_invariants(name);
    INFO(name, ": ", result.detail);
    CHECK(result.pass);
  }
  CHECK_THROWS_AS(check_invariants("nope"), std::invalid_argument);
}

TEST_CASE("matrix files round-trip") {
  Matrix m(2, 3);
  double v = 0.125;
  for (double& x : m.raw()) {
    x = v;
    v *= 0.517;
  }
  std::stringstream ss;
  write_matrix(ss, m);
  const Matrix back = read_matrix(ss);
  CHECK(back.rows() == 2);
  CHECK(back.cols() == 3);
  CHECK(max_abs_diff(m, back) == 0.0);

  std::stringstream broken("2 2\n1.0 0.5\n");
  CHECK_THROWS_AS(read_matrix(broken), std::runtime_error);
}

}  // TEST_SUITE
