#include "decomp/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "decomp/dd.hpp"
#include "decomp/parallel.hpp"
#include "decomp/pd.hpp"
#include "decomp/rng.hpp"
#include "decomp/sdd.hpp"
#include "decomp/spd.hpp"

namespace decomp::bench {

namespace ex = decomp::examples;

namespace {
constexpr std::uint64_t kTagSample = 0x5A11;

std::uint64_t sample_seed(std::uint64_t seed, int sample) {
  return SplitRng(seed, {kTagSample, static_cast<std::uint64_t>(sample)}).next_u64();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}
}  // namespace

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kPd:
      return "pd";
    case Algorithm::kSpd:
      return "spd";
    case Algorithm::kDd:
      return "dd";
    case Algorithm::kSdd:
      return "sdd";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(const std::string& name) {
  if (name == "pd") return Algorithm::kPd;
  if (name == "spd") return Algorithm::kSpd;
  if (name == "dd") return Algorithm::kDd;
  if (name == "sdd") return Algorithm::kSdd;
  return std::nullopt;
}

bool applicable(Algorithm a, int example) {
  switch (a) {
    case Algorithm::kPd:
      return example >= 1 && example <= 3;
    case Algorithm::kSpd:
      return example == 2 || example == 3;
    case Algorithm::kDd:
      return example >= 4 && example <= 6;
    case Algorithm::kSdd:
      return example == 5 || example == 6;
  }
  return false;
}

AlgorithmParams default_params(Algorithm a, int example) {
  AlgorithmParams p;
  switch (a) {
    case Algorithm::kPd:
      p.tau = (example == 3) ? 5.0 : 0.0;
      p.gamma0 = 1.0;
      p.alpha = 1.0;
      p.beta = 5.0;
      p.epsilon = 1.0;
      break;
    case Algorithm::kSpd:
      p.tau_x = 1e8;
      p.tau_y = 0.0;
      p.gamma0 = 1.0;
      p.alpha = 0.0;
      p.beta = 1.0;
      p.epsilon = 0.1;
      p.gamma_in0 = 1.0;
      p.beta_in = 0.5;
      break;
    case Algorithm::kDd:
      p.tau = (example == 4) ? 8.0 : 10.0;
      p.gamma0 = (example == 6) ? 1.0 : 0.01;
      p.alpha = 3.0;
      p.beta = 1.0;
      p.epsilon = 0.9;
      break;
    case Algorithm::kSdd:
      p.tau = (example == 6) ? 1e-1 : 1e-5;
      p.curvature_l = 0.1;
      p.gamma0 = 1.0;
      p.alpha = 1.0;
      p.beta = 1.0;
      p.epsilon = 0.1;
      p.gamma_in0 = (example == 6) ? 0.001 : 1.0;
      p.beta_in = (example == 6) ? 0.9 : 0.5;
      break;
  }
  return p;
}

void RunConfig::validate() const {
  if (example < 1 || example > 6) throw ConfigError("example must be in 1..6");
  if (!applicable(algorithm, example))
    throw ConfigError(std::string(algorithm_name(algorithm)) + " is not applicable to example " +
                      std::to_string(example));
  if (blocks < 1) throw ConfigError("blocks must be >= 1");
  if (samples < 1 || inits < 1) throw ConfigError("samples and inits must be >= 1");
  if (max_outer < 1) throw ConfigError("max_outer must be >= 1");
  if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
}

RunConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  RunConfig cfg;
  try {
    cfg.example = j.at("example").get<int>();
    auto alg = parse_algorithm(j.at("algorithm").get<std::string>());
    if (!alg) throw ConfigError("unknown algorithm in config");
    cfg.algorithm = *alg;
    cfg.blocks = j.value("blocks", cfg.blocks);
    cfg.samples = j.value("samples", cfg.samples);
    cfg.inits = j.value("inits", cfg.inits);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.max_outer = j.value("max_outer", cfg.max_outer);
    cfg.out = j.value("out", cfg.out);
    cfg.parallelism = j.value("parallelism", cfg.parallelism);
    cfg.record_time = j.value("record_time", cfg.record_time);
    cfg.plot_dir = j.value("plot_dir", cfg.plot_dir);
    cfg.params = default_params(cfg.algorithm, cfg.example);
    if (j.contains("params")) {
      const auto& q = j["params"];
      cfg.params.tau = q.value("tau", cfg.params.tau);
      cfg.params.tau_x = q.value("tau_x", cfg.params.tau_x);
      cfg.params.tau_y = q.value("tau_y", cfg.params.tau_y);
      cfg.params.gamma0 = q.value("gamma0", cfg.params.gamma0);
      cfg.params.alpha = q.value("alpha", cfg.params.alpha);
      cfg.params.beta = q.value("beta", cfg.params.beta);
      cfg.params.epsilon = q.value("epsilon", cfg.params.epsilon);
      cfg.params.gamma_in0 = q.value("gamma_in0", cfg.params.gamma_in0);
      cfg.params.beta_in = q.value("beta_in", cfg.params.beta_in);
      cfg.params.sigma = q.value("sigma", cfg.params.sigma);
      cfg.params.inner_t = q.value("T", cfg.params.inner_t);
      cfg.params.curvature_l = q.value("L", cfg.params.curvature_l);
    }
    cfg.params_set = true;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

int RunReport::convergent() const {
  int n = 0;
  for (const auto& r : rows) n += r.converged ? 1 : 0;
  return n;
}

double RunReport::proportion() const {
  return rows.empty() ? 0.0 : static_cast<double>(convergent()) / static_cast<double>(total());
}

Trajectory run_single_trial(const RunConfig& cfg, int sample, int init, int block_threads) {
  const auto variant = static_cast<ex::Variant>(cfg.example);
  const std::uint64_t s = sample_seed(cfg.seed, sample);
  ex::ExampleParams params = ex::sample_example(variant, cfg.blocks, s);
  std::vector<ex::InitialPoint> inits = ex::sample_initial_points(params, init + 1, s);
  const ex::InitialPoint& ip = inits.back();
  const AlgorithmParams& ap =
      cfg.params_set ? cfg.params : default_params(cfg.algorithm, cfg.example);

  StepSchedule outer{ap.gamma0, ap.alpha, ap.beta, ap.epsilon};
  InnerStepSchedule inner{ap.gamma_in0, ap.beta_in};

  Trajectory traj;
  switch (cfg.algorithm) {
    case Algorithm::kPd: {
      ProblemPD prob = ex::make_pd_problem(params);
      PDConfig c;
      c.step = outer;
      c.tau = ap.tau;
      c.threads = block_threads;
      traj = run_pd(prob, ip.y, c, cfg.max_outer);
      break;
    }
    case Algorithm::kSpd: {
      ProblemSPD prob = ex::make_spd_problem(params);
      SPDConfig c;
      c.outer = outer;
      c.inner = inner;
      c.sigma = ap.sigma;
      c.T = ap.inner_t;
      c.threads = block_threads;
      c.surrogate.tau_x = ap.tau_x;
      c.surrogate.tau_y = ap.tau_y;
      c.build = ex::spd_builder(params, c.surrogate);
      traj = run_spd(prob, ip.x, ip.y, c, cfg.max_outer);
      break;
    }
    case Algorithm::kDd: {
      ProblemDD prob = ex::make_dd_problem(params);
      DDConfig c;
      c.step = outer;
      c.tau_mu = ap.tau;
      c.tau_lambda = ap.tau;
      c.threads = block_threads;
      VectorXd mu0 = (prob.coupled_ineq_dim > 0) ? ip.mu : VectorXd(0);
      VectorXd lambda0 = (prob.coupled_eq_dim > 0) ? ip.lambda : VectorXd(0);
      traj = run_dd(prob, mu0, lambda0, c, cfg.max_outer);
      break;
    }
    case Algorithm::kSdd: {
      ProblemSDD prob = ex::make_sdd_problem(params);
      SDDConfig c;
      c.outer = outer;
      c.inner = inner;
      c.sigma = ap.sigma;
      c.T = ap.inner_t;
      c.threads = block_threads;
      c.surrogate.tau = ap.tau;
      c.surrogate.curvature_l = ap.curvature_l;
      c.build = ex::sdd_builder(params, c.surrogate);
      traj = run_sdd(prob, ip.x, ip.mu, VectorXd(0), c, cfg.max_outer);
      break;
    }
  }

  if (!traj.failed && static_cast<int>(traj.entries.size()) > 10) {
    traj.converged = ex::check_convergence(traj, ex::criterion_for(variant));
  }
  return traj;
}

RunReport run_experiment(const RunConfig& cfg) {
  cfg.validate();
  const auto variant = static_cast<ex::Variant>(cfg.example);
  const int n_trials = cfg.samples * cfg.inits;
  const int trial_threads = std::min(cfg.parallelism, n_trials);
  const int block_threads = std::max(1, cfg.parallelism / std::max(1, trial_threads));

  RunReport report;
  report.rows.resize(static_cast<size_t>(n_trials));
  std::vector<Trajectory> trajectories(static_cast<size_t>(n_trials));

  parallel_for(n_trials, trial_threads, [&](int t) {
    const int sample = t / cfg.inits;
    const int init = t % cfg.inits;
    TrialResult row;
    row.sample = sample;
    row.init = init;
    try {
      Trajectory traj = run_single_trial(cfg, sample, init, block_threads);
      row.converged = traj.converged;
      row.iterations = traj.iterations();
      ex::BestObjective best = ex::best_objective(traj, variant);
      if (best.found) {
        row.best_objective = best.value;
        row.time_to_best_s = best.time_s;
      }
      trajectories[static_cast<size_t>(t)] = std::move(traj);
    } catch (const std::exception&) {
      row.converged = false;  // failures never abort the sweep
    }
    report.rows[static_cast<size_t>(t)] = row;
  });

  if (!cfg.plot_dir.empty()) {
    std::filesystem::create_directories(cfg.plot_dir);
    for (int t = 0; t < n_trials; ++t) {
      const auto& traj = trajectories[static_cast<size_t>(t)];
      if (traj.entries.empty()) continue;
      std::ostringstream name;
      name << cfg.plot_dir << "/trial_s" << (t / cfg.inits) << "_i" << (t % cfg.inits) << ".dat";
      std::ofstream out(name.str());
      if (!out) throw IoError("cannot write plot data: " + name.str());
      for (size_t k = 0; k < traj.entries.size(); ++k)
        out << k << " " << fmt(traj.entries[k].objective) << "\n";
    }
  }
  return report;
}

std::string format_report(const RunReport& report, const RunConfig& cfg) {
  std::ostringstream out;
  out << "sample,init,converged,best_objective,time_to_best_s,iterations\n";
  for (const auto& r : report.rows) {
    out << r.sample << "," << r.init << "," << (r.converged ? 1 : 0) << ",";
    if (r.best_objective) out << fmt(*r.best_objective);
    out << ",";
    char tbuf[40];
    std::snprintf(tbuf, sizeof(tbuf), "%.6f", cfg.record_time ? r.time_to_best_s : 0.0);
    out << tbuf << "," << r.iterations << "\n";
  }
  // Averages are over this run's convergent trials only; there is no
  // cross-algorithm intersection of trials here.
  double best_sum = 0.0, time_sum = 0.0;
  int best_n = 0;
  for (const auto& r : report.rows) {
    if (!r.converged || !r.best_objective) continue;
    best_sum += *r.best_objective;
    time_sum += r.time_to_best_s;
    ++best_n;
  }
  char abuf[160];
  std::snprintf(abuf, sizeof(abuf),
                "# proportion=%.6f converged=%d total=%d mean_best=%s mean_time_to_best_s=%.6f\n",
                report.proportion(), report.convergent(), report.total(),
                best_n ? fmt(best_sum / best_n).c_str() : "",
                (best_n && cfg.record_time) ? time_sum / best_n : 0.0);
  out << abuf;
  return out.str();
}

void write_report(const RunReport& report, const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << format_report(report, cfg);
  if (!out) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// verify: quick envelope/oracle/surrogate suites.
// ---------------------------------------------------------------------------

namespace {

struct Suite {
  std::ostream& out;
  int failures = 0;
  void check(const std::string& name, bool ok) {
    out << (ok ? "[ok]   " : "[FAIL] ") << name << "\n";
    failures += ok ? 0 : 1;
  }
};

double f_dagger(const ProblemPD& p, const VectorXd& y) {
  double v = p.f0.value(y);
  for (int i = 0; i < p.block_count; ++i)
    v += p.f[static_cast<size_t>(i)].value(p.block_solver(i, y), y);
  return v;
}

bool envelope_check(ex::Variant variant, std::uint64_t seed, int blocks, double rel_tol) {
  ex::ExampleParams params = ex::sample_example(variant, blocks, seed);
  ProblemPD p = ex::make_pd_problem(params);
  SplitRng rng(seed, {0xE0});
  VectorXd y = VectorXd::Constant(1, rng.uniform(0.05, 0.95));

  VectorXd grad = p.f0.grad(y);
  for (int i = 0; i < p.block_count; ++i) {
    auto [xi, mi] = solve_subproblem_pd(p, i, y);
    grad += master_gradient_block(p, i, y, xi, mi);
  }
  const double h = 1e-5;
  VectorXd yp = y, ym = y;
  yp[0] += h;
  ym[0] -= h;
  double fd = (f_dagger(p, yp) - f_dagger(p, ym)) / (2 * h);
  double denom = std::max({1.0, std::fabs(fd), std::fabs(grad[0])});
  return std::fabs(grad[0] - fd) / denom <= rel_tol;
}

double q_dagger(const ProblemDD& p, const VectorXd& mu, const VectorXd& lambda,
                BlockVector& warm) {
  double v = 0.0;
  for (int i = 0; i < p.block_count; ++i) {
    VectorXd xi = p.block_solver(i, mu, lambda, &warm.blocks[static_cast<size_t>(i)]);
    warm.blocks[static_cast<size_t>(i)] = xi;
    v += partial_lagrangian(p, i, xi, mu, lambda);
  }
  return v;
}

bool dual_envelope_check(std::uint64_t seed, int blocks, double rel_tol) {
  ex::ExampleParams params = ex::sample_example(ex::Variant::kEx4, blocks, seed);
  ProblemDD p = ex::make_dd_problem(params);
  SplitRng rng(seed, {0xE1});
  VectorXd lambda = VectorXd::Constant(1, rng.uniform(-0.5, 0.5));
  VectorXd mu(0);

  BlockVector x;
  x.blocks.resize(static_cast<size_t>(blocks));
  for (int i = 0; i < blocks; ++i) {
    x.blocks[static_cast<size_t>(i)] = p.block_solver(i, mu, lambda, nullptr);
  }
  auto [gmu, glam] = dual_gradients(p, x);

  const double h = 1e-6;
  BlockVector warm_p = x, warm_m = x;
  VectorXd lp = lambda, lm = lambda;
  lp[0] += h;
  lm[0] -= h;
  double fd = (q_dagger(p, mu, lp, warm_p) - q_dagger(p, mu, lm, warm_m)) / (2 * h);
  double denom = std::max({1.0, std::fabs(fd), std::fabs(glam[0])});
  return std::fabs(glam[0] - fd) / denom <= rel_tol;
}

bool oracle_fd_check(ex::Variant variant, std::uint64_t seed) {
  ex::ExampleParams params = ex::sample_example(variant, 3, seed);
  SplitRng rng(seed, {0xF0});
  double worst = 0.0;
  if (ex::coupling_variable_family(variant)) {
    ProblemPD p = ex::make_pd_problem(params);
    for (int trial = 0; trial < 60; ++trial) {
      int i = static_cast<int>(rng.next_u64() % 3);
      VectorXd x(2), y(1);
      x << rng.uniform(-1, 1), rng.uniform(-2, 2);
      y << rng.uniform(0.05, 0.95);
      const auto& f = p.f[static_cast<size_t>(i)];
      VectorXd gx = f.grad_x(x, y);
      VectorXd fdx = fd_gradient([&](const VectorXd& v) { return f.value(v, y); }, x);
      worst = std::max(worst, (gx - fdx).norm() / std::max(1.0, fdx.norm()));
      VectorXd gy = f.grad_y(x, y);
      VectorXd fdy = fd_gradient([&](const VectorXd& v) { return f.value(x, v); }, y);
      worst = std::max(worst, (gy - fdy).norm() / std::max(1.0, fdy.norm()));
      const auto& cons =
          p.h_coupled[static_cast<size_t>(i)].empty() ? p.g_coupled[static_cast<size_t>(i)]
                                                      : p.h_coupled[static_cast<size_t>(i)];
      VectorXd cgx = cons.grad_x(x, y).col(0);
      VectorXd cfd =
          fd_gradient([&](const VectorXd& v) { return cons.value(v, y)[0]; }, x);
      worst = std::max(worst, (cgx - cfd).norm() / std::max(1.0, cfd.norm()));
    }
  } else {
    ProblemDD p = ex::make_dd_problem(params);
    for (int trial = 0; trial < 60; ++trial) {
      int i = static_cast<int>(rng.next_u64() % 3);
      VectorXd x(1);
      x << rng.uniform(-0.05, 0.05);
      const auto& f = p.f[static_cast<size_t>(i)];
      VectorXd g = f.grad(x);
      VectorXd fd = fd_gradient(f.value, x);
      worst = std::max(worst, (g - fd).norm() / std::max(1.0, fd.norm()));
    }
  }
  return worst <= 1e-4;
}

bool schedule_check(const StepSchedule& s) {
  for (int k = 0; k <= 1000; ++k) {
    double g = outer_step(s, k);
    if (!(g > 0.0 && g <= 1.0)) return false;
  }
  // Decay below 1e-4 past the closed-form crossover.
  double crossover = std::pow(2e4 / s.beta, 1.0 / s.epsilon);
  if (outer_step(s, static_cast<int>(std::min(crossover + 1, 2e9))) >= 1e-4 &&
      crossover < 2e9)
    return false;
  // Divergence witness on the partial sums.
  const int k0 = 100000;
  double tail = 0.0;
  for (int k = k0 + 1; k <= 2 * k0; ++k) tail += outer_step(s, k);
  return tail >= 0.5 / s.beta * std::pow(static_cast<double>(k0), 1.0 - s.epsilon) * 0.5;
}

bool surrogate_checks(Suite& suite) {
  // Taylor surrogate against the shifted original.
  VectorXd anchor(2);
  anchor << 0.4, -0.3;
  FunctionOracle f;
  f.dim = 2;
  f.value = [](const VectorXd& v) { return std::sin(v[0]) + v[1] * v[1] * v[1]; };
  f.grad = [](const VectorXd& v) {
    VectorXd g(2);
    g << std::cos(v[0]), 3 * v[1] * v[1];
    return g;
  };
  FunctionOracle shifted = f;
  double f0 = f.value(anchor);
  shifted.value = [f, f0](const VectorXd& v) { return f.value(v) - f0; };
  FunctionOracle t = taylor_quadratic_surrogate(f.grad(anchor), anchor, 2.0);
  SurrogateReport r = verify_surrogate(t, shifted, anchor, {});
  bool ok = r.touching_err <= 1e-10 && r.gradient_err <= 1e-6;
  suite.check("taylor surrogate anchoring", ok);
  return ok;
}

}  // namespace

int verify_suites(std::ostream& out) {
  Suite suite{out};
  for (int v = 1; v <= 6; ++v)
    suite.check("oracle finite-difference consistency, example " + std::to_string(v),
                oracle_fd_check(static_cast<ex::Variant>(v), 1000 + static_cast<std::uint64_t>(v)));
  suite.check("envelope gradient, example 1", envelope_check(ex::Variant::kEx1, 7, 2, 1e-4));
  suite.check("envelope gradient, example 2", envelope_check(ex::Variant::kEx2, 8, 2, 1e-4));
  suite.check("dual envelope gradient, example 4", dual_envelope_check(9, 2, 1e-3));
  surrogate_checks(suite);
  suite.check("outer step schedule (pd defaults)", schedule_check({1.0, 1.0, 5.0, 1.0}));
  suite.check("outer step schedule (dd defaults)", schedule_check({0.01, 3.0, 1.0, 0.9}));
  suite.check("outer step schedule (spd defaults)", schedule_check({1.0, 0.0, 1.0, 0.1}));
  out << (suite.failures == 0 ? "all suites passed\n"
                              : std::to_string(suite.failures) + " suite(s) failed\n");
  return suite.failures;
}

int table3(std::ostream& out, int blocks, int samples, int inits, std::uint64_t seed,
           int parallelism) {
  out << "algorithm";
  for (int e = 1; e <= 6; ++e) out << "\tex" << e;
  out << "\n";
  for (Algorithm a : {Algorithm::kPd, Algorithm::kSpd, Algorithm::kDd, Algorithm::kSdd}) {
    out << algorithm_name(a);
    for (int e = 1; e <= 6; ++e) {
      if (!applicable(a, e)) {
        out << "\tn/a";
        continue;
      }
      RunConfig cfg;
      cfg.example = e;
      cfg.algorithm = a;
      cfg.blocks = blocks;
      cfg.samples = samples;
      cfg.inits = inits;
      cfg.seed = seed;
      cfg.parallelism = parallelism;
      RunReport rep = run_experiment(cfg);
      char buf[16];
      std::snprintf(buf, sizeof(buf), "\t%.0f%%", 100.0 * rep.proportion());
      out << buf;
    }
    out << "\n";
  }
  return 0;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"decomposition algorithms benchmark harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment sweep and write a CSV report");
  std::string config_path, out_path, plot_dir, algorithm = "pd";
  int example = 1, blocks = 100, samples = 10, inits = 10, max_outer = 10, parallelism = 1;
  std::uint64_t seed = 0;
  bool no_times = false;
  run->add_option("--config", config_path, "JSON config file (overrides other flags)");
  run->add_option("--example", example, "example family, 1..6");
  run->add_option("--algorithm", algorithm, "pd|spd|dd|sdd");
  run->add_option("--blocks", blocks, "number of blocks I");
  run->add_option("--samples", samples, "problem parameter samples");
  run->add_option("--inits", inits, "initial points per sample");
  run->add_option("--seed", seed, "master seed");
  run->add_option("--out", out_path, "output CSV path");
  run->add_option("--max-outer", max_outer, "outer iterations per trial");
  run->add_option("--parallelism", parallelism, "total worker threads");
  run->add_option("--plot-dir", plot_dir, "write per-trial (iteration, objective) files here");
  run->add_flag("--no-times", no_times, "write zeros in the time column (deterministic output)");

  auto* verify = app.add_subcommand("verify", "run the gradient/envelope/oracle self-checks");

  auto* t3 = app.add_subcommand("table3", "convergence proportions across applicable pairs");
  int t3_blocks = 100, t3_samples = 10, t3_inits = 10, t3_par = 1;
  std::uint64_t t3_seed = 0;
  t3->add_option("--blocks", t3_blocks, "number of blocks I");
  t3->add_option("--samples", t3_samples, "problem parameter samples");
  t3->add_option("--inits", t3_inits, "initial points per sample");
  t3->add_option("--seed", t3_seed, "master seed");
  t3->add_option("--parallelism", t3_par, "total worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      RunConfig cfg;
      if (!config_path.empty()) {
        cfg = config_from_json_file(config_path);
      } else {
        cfg.example = example;
        auto alg = parse_algorithm(algorithm);
        if (!alg) throw ConfigError("unknown algorithm: " + algorithm);
        cfg.algorithm = *alg;
        cfg.blocks = blocks;
        cfg.samples = samples;
        cfg.inits = inits;
        cfg.seed = seed;
        cfg.max_outer = max_outer;
        cfg.parallelism = parallelism;
        cfg.out = out_path;
        cfg.plot_dir = plot_dir;
        cfg.record_time = !no_times;
        cfg.validate();
      }
      RunReport rep = run_experiment(cfg);
      if (!cfg.out.empty()) write_report(rep, cfg, cfg.out);
      std::printf("trials=%d convergent=%d proportion=%.3f\n", rep.total(), rep.convergent(),
                  rep.proportion());
      return 0;
    }
    if (verify->parsed()) {
      return verify_suites(std::cout) == 0 ? 0 : 1;
    }
    if (t3->parsed()) {
      return table3(std::cout, t3_blocks, t3_samples, t3_inits, t3_seed, t3_par);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}

}  // namespace decomp::bench
