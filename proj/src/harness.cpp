#include "oltr/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "oltr/learner.hpp"
#include "oltr/oracle.hpp"
#include "oltr/polytope.hpp"
#include "oltr/sampler.hpp"

namespace oltr {

namespace {

using nlohmann::json;

// Shortest round-trip decimal form; locale-independent.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

EnvKind parse_kind(const std::string& s) {
  if (s == "stochastic") return EnvKind::kStochastic;
  if (s == "periodic_swap") return EnvKind::kPeriodicSwap;
  if (s == "periodic_reverse") return EnvKind::kPeriodicReverse;
  if (s == "hard_instance") return EnvKind::kHardInstance;
  throw ConfigError("environment.kind", "unknown kind '" + s + "'");
}

SolverRoute parse_route(const std::string& s) {
  if (s == "cbp") return SolverRoute::kCbp;
  if (s == "fw") return SolverRoute::kFw;
  throw ConfigError("solver.route", "unknown route '" + s + "'");
}

double best_enumerated_loss(const std::vector<Action>& actions, const Matrix& cum_loss) {
  double best = std::numeric_limits<double>::infinity();
  for (const Action& a : actions) {
    double v = 0.0;
    for (int j = 0; j < cum_loss.cols(); ++j) v += cum_loss(a.items[j], j);
    best = std::min(best, v);
  }
  return best;
}

// --- instance generators shared by the check suites -----------------------

std::vector<int> random_permutation(Rng& rng, int n) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i + 1)]);
  return perm;
}

StochasticParams random_valid_params(Rng& rng, const Dims& dims) {
  constexpr double kMinGap = 1e-3;
  StochasticParams p;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    p.alpha.assign(dims.n, 0.0);
    for (double& a : p.alpha) a = rng.uniform01();
    std::sort(p.alpha.rbegin(), p.alpha.rend());
    bool ok = true;
    for (int i = 0; i + 1 < std::min(dims.m + 1, dims.n); ++i) {
      ok = ok && p.alpha[i] - p.alpha[i + 1] >= kMinGap;
    }
    if (!ok) continue;
    p.beta.assign(dims.m, 0.0);
    for (double& b : p.beta) b = 0.05 + 0.95 * rng.uniform01();
    std::sort(p.beta.rbegin(), p.beta.rend());
    for (int j = 0; j + 1 < dims.m; ++j) ok = ok && p.beta[j] - p.beta[j + 1] >= kMinGap;
    if (!ok) continue;
    validate_params(p, dims);
    return p;
  }
  throw std::runtime_error("random_valid_params: rejection sampling stalled");
}

Matrix random_doubly_stochastic(Rng& rng, int n) {
  const int k = 2 * n;
  std::vector<double> w(k);
  double total = 0.0;
  for (double& v : w) {
    v = -std::log(1.0 - rng.uniform01());
    total += v;
  }
  Matrix out(n, n, 0.0);
  for (int c = 0; c < k; ++c) {
    const std::vector<int> perm = random_permutation(rng, n);
    for (int i = 0; i < n; ++i) out(i, perm[i]) += w[c] / total;
  }
  return out;
}

Matrix random_feasible_allocation(Rng& rng, const Dims& dims, double uniform_blend) {
  const int k = 2 * dims.n;
  std::vector<double> w(k);
  double total = 0.0;
  for (double& v : w) {
    v = -std::log(1.0 - rng.uniform01());
    total += v;
  }
  Matrix x(dims.n, dims.m, uniform_blend / static_cast<double>(dims.n));
  for (int c = 0; c < k; ++c) {
    const std::vector<int> perm = random_permutation(rng, dims.n);
    for (int i = 0; i < dims.n; ++i) {
      if (perm[i] < dims.m) x(i, perm[i]) += (1.0 - uniform_blend) * w[c] / total;
    }
  }
  return x;
}

// --- property suites -------------------------------------------------------

SuiteResult suite_gap(std::uint64_t seed) {
  SuiteResult out{"gap", false, std::numeric_limits<double>::infinity(), ""};
  Rng rng(derive_seed(seed, {1}));
  for (int draw = 0; draw < 200; ++draw) {
    const int n = rng.uniform_int(2, 7);
    const int m = rng.uniform_int(1, std::min(4, n) + 1);
    const Dims dims{n, m};
    const StochasticParams p = random_valid_params(rng, dims);
    out.worst = std::min(out.worst, verify_gap_inequality(p, dims).min_slack);
  }
  out.pass = out.worst >= -1e-12;
  out.detail = "min slack over 200 parameter draws = " + fmt(out.worst);
  return out;
}

SuiteResult suite_sampler(std::uint64_t seed) {
  SuiteResult out{"sampler", false, 0.0, ""};
  Rng rng(derive_seed(seed, {2}));
  const Dims dims{6, 3};
  const int samples = 100000;
  for (int rep = 0; rep < 5; ++rep) {
    const Matrix x = random_feasible_allocation(rng, dims, 0.2);
    const Matrix w = complete_to_doubly_stochastic(x, dims);
    const Decomposition d = decompose(w);
    Matrix counts(dims.n, dims.m, 0.0);
    for (int s = 0; s < samples; ++s) {
      const Action a = action_from_permutation(pick_term(d, rng).perm, dims);
      for (int j = 0; j < dims.m; ++j) counts(a.items[j], j) += 1.0;
    }
    for (int i = 0; i < dims.n; ++i) {
      for (int j = 0; j < dims.m; ++j) {
        const double mean = counts(i, j) / samples;
        const double sigma =
            std::sqrt(std::max(x(i, j) * (1.0 - x(i, j)), 1e-12) / samples);
        out.worst = std::max(out.worst, std::abs(mean - x(i, j)) / sigma);
      }
    }
  }
  out.pass = out.worst <= 4.0;
  out.detail = "worst |empirical - x| in sigmas over 5 allocations x 1e5 draws = " + fmt(out.worst);
  return out;
}

SuiteResult suite_solver_agree(std::uint64_t seed) {
  SuiteResult out{"solver-agree", false, 0.0, ""};
  Rng rng(derive_seed(seed, {3}));
  SolverConfig cbp_cfg;
  SolverConfig fw_cfg;
  fw_cfg.route = SolverRoute::kFw;
  fw_cfg.fw_max_iters = 20000;  // agreement needs FW run to convergence
  fw_cfg.convergence_tol = 1e-5;
  for (int draw = 0; draw < 40; ++draw) {
    const int n = rng.uniform_int(2, 7);
    const int m = rng.uniform_int(1, std::min(4, n) + 1);
    Matrix cum_loss(n, m);
    for (double& v : cum_loss.raw()) v = 3.0 * rng.uniform01();
    const double eta = 0.1 + 0.6 * rng.uniform01();
    const Matrix uniform(n, m, 1.0 / n);
    const SolveResult a = solve_cbp(cum_loss, eta, cbp_cfg);
    const SolveResult b = solve_fw(cum_loss, eta, fw_cfg, uniform);
    out.worst = std::max(out.worst, std::abs(a.objective - b.objective));
  }
  out.pass = out.worst <= 1e-5;
  out.detail = "max |obj_cbp - obj_fw| over 40 instances = " + fmt(out.worst);
  return out;
}

SuiteResult suite_decompose(std::uint64_t seed) {
  SuiteResult out{"decompose", false, 0.0, ""};
  Rng rng(derive_seed(seed, {4}));
  bool bounds_ok = true;
  for (int draw = 0; draw < 100; ++draw) {
    const int n = rng.uniform_int(2, 9);
    const Matrix w = random_doubly_stochastic(rng, n);
    const Decomposition d = decompose(w);
    bounds_ok = bounds_ok && static_cast<int>(d.terms.size()) <= n * n - 2 * n + 2;
    out.worst = std::max(out.worst, max_abs_diff(w, reconstruct(d, n)));
  }
  out.pass = bounds_ok && out.worst <= 1e-8;
  out.detail = "max reconstruction error over 100 matrices = " + fmt(out.worst) +
               (bounds_ok ? "" : " (term-count bound violated)");
  return out;
}

SuiteResult suite_estimator(std::uint64_t seed) {
  SuiteResult out{"estimator", false, 0.0, ""};
  Rng rng(derive_seed(seed, {5}));
  const Dims dims{6, 3};
  const int samples = 100000;
  const Matrix x = random_feasible_allocation(rng, dims, 0.4);
  Matrix truth(dims.n, dims.m);
  for (double& v : truth.raw()) v = rng.uniform01();
  const Decomposition d = decompose(complete_to_doubly_stochastic(x, dims));
  Matrix sum(dims.n, dims.m, 0.0), sum_sq(dims.n, dims.m, 0.0);
  std::vector<double> observed(dims.m);
  for (int s = 0; s < samples; ++s) {
    const Action a = action_from_permutation(pick_term(d, rng).perm, dims);
    for (int j = 0; j < dims.m; ++j) observed[j] = truth(a.items[j], j);
    const Matrix ell_hat = Learner::estimate_loss(x, a, observed, dims);
    for (std::size_t k = 0; k < sum.raw().size(); ++k) {
      sum.raw()[k] += ell_hat.raw()[k];
      sum_sq.raw()[k] += ell_hat.raw()[k] * ell_hat.raw()[k];
    }
  }
  for (std::size_t k = 0; k < sum.raw().size(); ++k) {
    const double mean = sum.raw()[k] / samples;
    const double var = std::max(sum_sq.raw()[k] / samples - mean * mean, 1e-12);
    const double stderr_mean = std::sqrt(var / samples);
    out.worst = std::max(out.worst, std::abs(mean - truth.raw()[k]) / stderr_mean);
  }
  out.pass = out.worst <= 4.0;
  out.detail = "worst |mean(l_hat) - l| in sigmas over 1e5 samples = " + fmt(out.worst);
  return out;
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.dims.m < 1) throw ConfigError("m", "must be >= 1");
  if (cfg.dims.n < cfg.dims.m) throw ConfigError("n", "must be >= m");
  if (cfg.horizon < 1) throw ConfigError("horizon", "must be >= 1");
  if (cfg.replicates < 1) throw ConfigError("replicates", "must be >= 1");
  if (cfg.record_every < 1) throw ConfigError("record_every", "must be >= 1");
  if (cfg.output_path.empty()) throw ConfigError("output_path", "must be non-empty");
  if (cfg.num_threads < 0) throw ConfigError("num_threads", "must be >= 0");
  try {
    validate_solver_config(cfg.solver);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("solver", e.what());
  }
  try {
    validate_environment(cfg.env, cfg.dims);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("environment", e.what());
  }
  if (cfg.env.kind != EnvKind::kStochastic) {
    try {
      count_actions(cfg.dims);
    } catch (const std::overflow_error&) {
      throw ConfigError("n", "hindsight regret needs an enumerable action set (n!/(n-m)! <= 1e6)");
    }
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.dims.n = j.at("n").get<int>();
    cfg.dims.m = j.at("m").get<int>();
    cfg.horizon = j.at("horizon").get<long>();
    const json& env = j.at("environment");
    cfg.env.kind = parse_kind(env.at("kind").get<std::string>());
    if (cfg.env.kind == EnvKind::kHardInstance) {
      cfg.env.hard_delta = env.at("hard_delta").get<double>();
      for (int item : env.at("hard_u").get<std::vector<int>>()) {
        cfg.env.hard_u.push_back(item - 1);  // config files are 1-based
      }
      cfg.env.hard_deterministic = env.value("hard_deterministic", false);
    } else if (env.contains("preset")) {
      cfg.env.params = preset(env.at("preset").get<std::string>());
    } else {
      cfg.env.params.alpha = env.at("alpha").get<std::vector<double>>();
      cfg.env.params.beta = env.at("beta").get<std::vector<double>>();
    }
    cfg.env.phase_length = env.value("phase_length", 100000L);
    cfg.replicates = j.value("replicates", 1);
    cfg.base_seed = j.value("base_seed", 0ULL);
    cfg.output_path = j.value("output_path", std::string("out"));
    cfg.record_every = j.value("record_every", 100L);
    cfg.record_wall_time = j.value("record_wall_time", false);
    cfg.num_threads = j.value("num_threads", 0);
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      cfg.solver.route = parse_route(s.value("route", std::string("cbp")));
      cfg.solver.fw_max_iters = s.value("fw_max_iters", cfg.solver.fw_max_iters);
      cfg.solver.cbp_max_cycles = s.value("cbp_max_cycles", cfg.solver.cbp_max_cycles);
      cfg.solver.newton_max_iters = s.value("newton_max_iters", cfg.solver.newton_max_iters);
      cfg.solver.newton_tol = s.value("newton_tol", cfg.solver.newton_tol);
      cfg.solver.convergence_tol = s.value("convergence_tol", cfg.solver.convergence_tol);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError("<schema>", e.what());
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

ReplicateTrace run_replicate(const ExperimentConfig& cfg, int replicate) {
  validate_config(cfg);
  const Dims dims = cfg.dims;
  const bool stochastic_mode = cfg.env.kind == EnvKind::kStochastic;
  std::vector<Action> all_actions;
  if (!stochastic_mode) all_actions = enumerate_actions(dims);

  Learner learner(dims, cfg.solver);
  ReplicateTrace trace;
  trace.replicate = replicate;
  trace.rows.reserve(static_cast<std::size_t>(cfg.horizon / cfg.record_every + 2));

  Matrix cum_realized(dims.n, dims.m, 0.0);
  double player_realized = 0.0;
  double expected_regret = 0.0;
  double cum_reward = 0.0;
  bool window_converged = true;
  std::vector<double> observed(dims.m);
  const auto start = std::chrono::steady_clock::now();

  for (long t = 1; t <= cfg.horizon; ++t) {
    Rng sampler_rng(derive_seed(cfg.base_seed,
                                {static_cast<std::uint64_t>(replicate), kStreamSampler,
                                 static_cast<std::uint64_t>(t)}));
    const RoundSelection sel = learner.select(sampler_rng);
    window_converged = window_converged && sel.solve.converged;

    Rng env_rng(derive_seed(cfg.base_seed,
                            {static_cast<std::uint64_t>(replicate), kStreamEnvironment,
                             static_cast<std::uint64_t>(t)}));
    const Matrix loss = draw_loss(cfg.env, t, dims, env_rng);

    double round_loss = 0.0;
    for (int j = 0; j < dims.m; ++j) {
      observed[j] = loss(sel.action.items[j], j);
      round_loss += observed[j];
    }
    cum_reward += dims.m - round_loss;

    if (stochastic_mode) {
      for (int j = 0; j < dims.m; ++j) {
        expected_regret += cfg.env.params.beta[j] *
                           (cfg.env.params.alpha[j] - cfg.env.params.alpha[sel.action.items[j]]);
      }
    } else {
      player_realized += round_loss;
      for (std::size_t k = 0; k < cum_realized.raw().size(); ++k) {
        cum_realized.raw()[k] += loss.raw()[k];
      }
    }

    learner.update(Learner::estimate_loss(sel.x, sel.action, observed, dims));

    if (t % cfg.record_every == 0 || t == cfg.horizon) {
      RunRecord row;
      row.t = t;
      row.cum_regret = stochastic_mode
                           ? expected_regret
                           : player_realized - best_enumerated_loss(all_actions, cum_realized);
      row.avg_reward = cum_reward / static_cast<double>(t);
      row.solver_converged = window_converged ? 1 : 0;
      if (cfg.record_wall_time) {
        row.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
      }
      trace.rows.push_back(row);
      window_converged = true;
    }
  }
  return trace;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  ExperimentResult result;
  result.traces.resize(cfg.replicates);

  std::string error;
#ifdef _OPENMP
  const int threads = cfg.num_threads > 0 ? cfg.num_threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (int rep = 0; rep < cfg.replicates; ++rep) {
    try {
      result.traces[rep] = run_replicate(cfg, rep);
    } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
      error = e.what();
    }
  }
  if (!error.empty()) throw std::runtime_error("run_experiment: " + error);

  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_path);
  for (int rep = 0; rep < cfg.replicates; ++rep) {
    char name[32];
    std::snprintf(name, sizeof(name), "rep_%03d.csv", rep);
    std::ofstream os(fs::path(cfg.output_path) / name, std::ios::binary);
    if (!os) throw std::runtime_error("run_experiment: cannot write trace file");
    write_trace_csv(os, result.traces[rep]);
  }
  std::ofstream os(fs::path(cfg.output_path) / "summary.csv", std::ios::binary);
  if (!os) throw std::runtime_error("run_experiment: cannot write summary file");
  write_summary_csv(os, result);
  return result;
}

void write_trace_csv(std::ostream& os, const ReplicateTrace& trace) {
  os << "t,cum_regret,avg_reward,solver_converged,wall_ms\n";
  for (const RunRecord& row : trace.rows) {
    os << row.t << ',' << fmt(row.cum_regret) << ',' << fmt(row.avg_reward) << ','
       << row.solver_converged << ',' << fmt(row.wall_ms) << '\n';
  }
}

void write_summary_csv(std::ostream& os, const ExperimentResult& result) {
  os << "t,mean_cum_regret,stderr_cum_regret,mean_avg_reward,stderr_avg_reward\n";
  if (result.traces.empty()) return;
  const std::size_t rows = result.traces[0].rows.size();
  const double reps = static_cast<double>(result.traces.size());
  for (std::size_t r = 0; r < rows; ++r) {
    double mean_regret = 0.0, mean_reward = 0.0;
    for (const ReplicateTrace& trace : result.traces) {
      mean_regret += trace.rows[r].cum_regret;
      mean_reward += trace.rows[r].avg_reward;
    }
    mean_regret /= reps;
    mean_reward /= reps;
    double var_regret = 0.0, var_reward = 0.0;
    for (const ReplicateTrace& trace : result.traces) {
      var_regret += (trace.rows[r].cum_regret - mean_regret) * (trace.rows[r].cum_regret - mean_regret);
      var_reward += (trace.rows[r].avg_reward - mean_reward) * (trace.rows[r].avg_reward - mean_reward);
    }
    const double denom = reps > 1.0 ? reps - 1.0 : 1.0;
    const double se_regret = std::sqrt(var_regret / denom / reps);
    const double se_reward = std::sqrt(var_reward / denom / reps);
    os << result.traces[0].rows[r].t << ',' << fmt(mean_regret) << ',' << fmt(se_regret) << ','
       << fmt(mean_reward) << ',' << fmt(se_reward) << '\n';
  }
}

SuiteResult check_invariants(const std::string& suite_name, std::uint64_t seed) {
  if (suite_name == "gap" || suite_name == "gap-inequality") return suite_gap(seed);
  if (suite_name == "sampler" || suite_name == "sampler-unbiasedness") return suite_sampler(seed);
  if (suite_name == "solver-agree" || suite_name == "solver-agreement") {
    return suite_solver_agree(seed);
  }
  if (suite_name == "decompose" || suite_name == "decomposition-reconstruction") {
    return suite_decompose(seed);
  }
  if (suite_name == "estimator" || suite_name == "estimator-unbiasedness") {
    return suite_estimator(seed);
  }
  throw std::invalid_argument("unknown suite '" + suite_name + "'");
}

std::vector<std::string> suite_names() {
  return {"gap", "sampler", "solver-agree", "decompose", "estimator"};
}

Matrix read_matrix(std::istream& is) {
  int rows = 0, cols = 0;
  if (!(is >> rows >> cols) || rows < 1 || cols < 1) {
    throw std::runtime_error("matrix file: first line must be 'n m'");
  }
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (!(is >> out(i, j))) throw std::runtime_error("matrix file: not enough entries");
    }
  }
  return out;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("matrix file: cannot open '" + path + "'");
  return read_matrix(in);
}

void write_matrix(std::ostream& os, const Matrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      os << (j > 0 ? " " : "") << fmt(m(i, j));
    }
    os << '\n';
  }
}

}  // namespace oltr
