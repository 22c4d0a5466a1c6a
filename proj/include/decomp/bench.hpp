#pragma once

#include <iosfwd>
#include <optional>

#include "decomp/examples.hpp"

namespace decomp::bench {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Algorithm { kPd, kSpd, kDd, kSdd };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(const std::string& name);

// Applicability per the example catalogue: PD {1,2,3}, SPD {2,3},
// DD {4,5,6}, SDD {5,6}.
bool applicable(Algorithm a, int example);

struct AlgorithmParams {
  double tau = 0.0;
  double tau_x = 0.0, tau_y = 0.0;
  double gamma0 = 1.0, alpha = 1.0, beta = 1.0, epsilon = 1.0;
  double gamma_in0 = 1.0, beta_in = 0.5;
  double sigma = 0.05;
  int inner_t = 10;
  double curvature_l = 0.0;
};

// Built-in benchmark defaults per (algorithm, example).
AlgorithmParams default_params(Algorithm a, int example);

struct RunConfig {
  int example = 1;
  Algorithm algorithm = Algorithm::kPd;
  int blocks = 100;
  int samples = 10;
  int inits = 10;
  std::uint64_t seed = 0;
  AlgorithmParams params;
  bool params_set = false;  // false -> default_params(algorithm, example)
  int max_outer = 10;
  std::string out;
  int parallelism = 1;
  bool record_time = true;
  std::string plot_dir;

  void validate() const;  // throws ConfigError
};

RunConfig config_from_json_file(const std::string& path);

struct TrialResult {
  int sample = 0, init = 0;
  bool converged = false;
  std::optional<double> best_objective;
  double time_to_best_s = 0.0;
  int iterations = 0;
};

struct RunReport {
  std::vector<TrialResult> rows;
  int total() const { return static_cast<int>(rows.size()); }
  int convergent() const;
  double proportion() const;
};

// One trial: sample the instance from (seed, sample), the initial point from
// (seed, sample, init), run the configured algorithm. Exposed for the
// stationarity checks.
Trajectory run_single_trial(const RunConfig& cfg, int sample, int init, int block_threads);

// samples x inits trials; trial-level and block-level concurrency split the
// parallelism budget. Per-trial failures become non-convergent rows.
RunReport run_experiment(const RunConfig& cfg);

// CSV: header, one row per trial, trailing aggregate comment line.
void write_report(const RunReport& report, const RunConfig& cfg, const std::string& path);
std::string format_report(const RunReport& report, const RunConfig& cfg);

// Self-check suites behind the `verify` subcommand; returns failure count.
int verify_suites(std::ostream& out);

// Convergence-proportion table across all applicable pairs.
int table3(std::ostream& out, int blocks, int samples, int inits, std::uint64_t seed,
           int parallelism);

// Exit codes: 0 success, 1 config/usage error, 2 I/O error.
int cli_main(int argc, const char* const* argv);

}  // namespace decomp::bench
