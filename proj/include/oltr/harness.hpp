#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "oltr/core.hpp"
#include "oltr/environments.hpp"
#include "oltr/solver.hpp"

namespace oltr {

// Configuration problems carry the offending field name; the CLI maps this
// to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::runtime_error("config field '" + field + "': " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  Dims dims;
  EnvironmentSpec env;
  long horizon = 0;
  int replicates = 1;
  std::uint64_t base_seed = 0;
  SolverConfig solver;
  std::string output_path = "out";
  long record_every = 100;
  bool record_wall_time = false;  // off by default so reruns are byte-identical
  int num_threads = 0;            // 0 = library default
};

void validate_config(const ExperimentConfig& cfg);
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

struct RunRecord {
  long t = 0;
  double cum_regret = 0.0;
  double avg_reward = 0.0;
  int solver_converged = 1;  // 1 iff every round since the last record converged
  double wall_ms = 0.0;
};

struct ReplicateTrace {
  int replicate = 0;
  std::vector<RunRecord> rows;
};

struct ExperimentResult {
  std::vector<ReplicateTrace> traces;
};

// One replicate, strictly sequential rounds; seeds derive from
// (base_seed, replicate, stream, round).
ReplicateTrace run_replicate(const ExperimentConfig& cfg, int replicate);

// All replicates (OpenMP across replicates when num_threads != 1), plus
// rep_<k>.csv and summary.csv under output_path. Deterministic given the
// config, independent of thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_trace_csv(std::ostream& os, const ReplicateTrace& trace);
void write_summary_csv(std::ostream& os, const ExperimentResult& result);

struct SuiteResult {
  std::string suite;
  bool pass = false;
  double worst = 0.0;  // worst-case residual/statistic observed
  std::string detail;
};

// Named property suites: gap, sampler, solver-agree, decompose, estimator
// (long aliases: gap-inequality, sampler-unbiasedness, solver-agreement,
// decomposition-reconstruction, estimator-unbiasedness). Throws
// std::invalid_argument for unknown names.
SuiteResult check_invariants(const std::string& suite_name, std::uint64_t seed = 20240501);
std::vector<std::string> suite_names();

// Matrix debug files: first line "n m", then whitespace-separated rows.
Matrix read_matrix(std::istream& is);
Matrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& os, const Matrix& m);

}  // namespace oltr
