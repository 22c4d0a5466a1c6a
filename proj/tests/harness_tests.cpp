#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "decomp/bench.hpp"
#include "decomp/dd.hpp"
#include "decomp/pd.hpp"
#include "decomp/rng.hpp"
#include "decomp/transforms.hpp"
#include "oracles.hpp"

using namespace decomp;
namespace ex = decomp::examples;
namespace bn = decomp::bench;

namespace {
VectorXd v1(double a) {
  VectorXd v(1);
  v << a;
  return v;
}

// Stationary point of an Ex1/Ex2 coupling-variable instance by bisecting the
// master envelope gradient over the y interval.
struct PdStationary {
  bool found = false;
  VectorXd y;
  BlockVector x;
  std::vector<MultiplierSet> mults;
};

PdStationary find_pd_stationary(const ProblemPD& p) {
  auto master_grad = [&](double yy) {
    VectorXd y = v1(yy);
    VectorXd g = p.f0.grad(y);
    for (int i = 0; i < p.block_count; ++i) {
      auto [xi, mi] = solve_subproblem_pd(p, i, y);
      g += master_gradient_block(p, i, y, xi, mi);
    }
    return g[0];
  };
  PdStationary out;
  double lo = 1e-9, hi = 1.0 - 1e-9;
  double glo = master_grad(lo), ghi = master_grad(hi);
  double ystar;
  if (glo > 0)
    ystar = 0.0;  // increasing from the left edge: stationary at the bound
  else if (ghi < 0)
    ystar = 1.0;
  else {
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (master_grad(mid) > 0 ? hi : lo) = mid;
    }
    ystar = 0.5 * (lo + hi);
  }
  out.y = v1(ystar);
  for (int i = 0; i < p.block_count; ++i) {
    auto [xi, mi] = solve_subproblem_pd(p, i, out.y);
    out.x.blocks.push_back(xi);
    out.mults.push_back(mi);
  }
  Nlp full = full_nlp(p);
  VectorXd v(full.dim);
  v << out.x.flatten(), out.y;
  MultiplierSet m = assemble_pd_multipliers(p, out.mults, VectorXd::Zero(p.g0.dim_out));
  out.found = kkt_residual(full, v, m).total() <= 1e-10;
  return out;
}

// Stationary point of an Ex4 instance by bisecting the dual gradient with
// branch-tracked block solves.
struct DdStationary {
  bool found = false;
  BlockVector x;
  VectorXd mu, lambda;
  std::vector<MultiplierSet> mults;
};

DdStationary find_dd_stationary(const ProblemDD& p) {
  DdStationary out;
  BlockVector warm;
  warm.blocks.assign(static_cast<size_t>(p.block_count), v1(0.0));
  auto sum_h = [&](double l) {
    double s = 0;
    for (int i = 0; i < p.block_count; ++i) {
      VectorXd xi = p.block_solver(i, VectorXd(0), v1(l), &warm.blocks[static_cast<size_t>(i)]);
      warm.blocks[static_cast<size_t>(i)] = xi;
      s += p.h_coupled[static_cast<size_t>(i)].value(xi)[0];
    }
    return s;
  };
  double lo = -3, hi = 3;
  double flo = sum_h(lo), fhi = sum_h(hi);
  if ((flo > 0) == (fhi > 0)) return out;  // no sign change: skip instance
  bool decreasing = flo > 0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = sum_h(mid);
    if ((fm > 0) == decreasing)
      lo = mid;
    else
      hi = mid;
  }
  double lstar = 0.5 * (lo + hi);
  if (std::fabs(sum_h(lstar)) > 1e-11) return out;  // quantized jump, not balanced
  out.mu = VectorXd(0);
  out.lambda = v1(lstar);
  for (int i = 0; i < p.block_count; ++i) {
    VectorXd xi =
        p.block_solver(i, out.mu, out.lambda, &warm.blocks[static_cast<size_t>(i)]);
    out.x.blocks.push_back(xi);
    Nlp sub = make_dd_subproblem(p, i, out.mu, out.lambda);
    out.mults.push_back(recover_multipliers(sub, xi));
  }
  Nlp full = full_nlp(p);
  MultiplierSet m = assemble_dd_multipliers(p, out.mu, out.lambda, out.mults);
  out.found = kkt_residual(full, out.x.flatten(), m).total() <= 1e-10;
  return out;
}
}  // namespace

// ---------------------------------------------------------------------------
// examples: sampling
// ---------------------------------------------------------------------------

TEST_CASE("sampling is deterministic and respects shapes") {
  auto a = ex::sample_example(ex::Variant::kEx1, 1000, 42);
  auto b = ex::sample_example(ex::Variant::kEx1, 1000, 42);
  REQUIRE(a.cv_blocks.size() == 1000);
  for (size_t i = 0; i < 1000; i += 97) {
    CHECK(a.cv_blocks[i].b2 == b.cv_blocks[i].b2);
    CHECK(a.cv_blocks[i].a[2][1] == b.cv_blocks[i].a[2][1]);
  }
  ProblemPD p = ex::make_pd_problem(a);
  CHECK(p.block_count == 1000);
  CHECK(p.block_dims[0] == 2);
  CHECK(p.y_dim == 1);
  CHECK(ex::sample_example(ex::Variant::kEx1, 10, 43).cv_blocks[3].b2 !=
        a.cv_blocks[3].b2);
}

TEST_CASE("sampling distributions match their moments") {
  const int n = 100000;
  auto p = ex::sample_example(ex::Variant::kEx1, n, 7);
  double b2_sum = 0, c2_sum = 0, b1_sum = 0, b1_sq = 0;
  for (const auto& b : p.cv_blocks) {
    b2_sum += b.b2;
    c2_sum += b.c2;
    b1_sum += b.b1;
    b1_sq += b.b1 * b.b1;
    CHECK(b.b2 > 0.0);
    CHECK(b.c2 >= 0.0);
  }
  // U(0,5000): mean 2500, se = 5000/sqrt(12 n) ~ 4.6
  CHECK(std::fabs(b2_sum / n - 2500.0) <= 50.0);
  // half-normal: mean sqrt(2/pi) ~ 0.7979, 3 se band
  CHECK(std::fabs(c2_sum / n - std::sqrt(2.0 / M_PI)) <= 3.0 * 0.6 / std::sqrt(1.0 * n));
  // N(0,1) coefficients
  CHECK(std::fabs(b1_sum / n) <= 3.0 / std::sqrt(1.0 * n));
  CHECK(std::fabs(b1_sq / n - 1.0) <= 3.0 * std::sqrt(2.0 / n));
  CHECK(p.y0 >= 0.0);
  CHECK(p.y0 <= 1.0);

  auto q = ex::sample_example(ex::Variant::kEx5, 100, 8);
  CHECK(q.b_global >= -0.001);
  CHECK(q.b_global <= 0.0);
}

TEST_CASE("initial points: feasibility per family") {
  auto p1 = ex::sample_example(ex::Variant::kEx1, 20, 11);
  auto inits = ex::sample_initial_points(p1, 10, 11);
  REQUIRE(inits.size() == 10);
  ProblemPD prob = ex::make_pd_problem(p1);
  for (const auto& ip : inits) {
    ViolationMetrics m = violation_metrics(prob, ip.x, ip.y);
    CHECK(m.max_eq <= 1e-12);  // equality solved exactly
    CHECK(ip.y[0] >= 0.0);
    CHECK(ip.y[0] <= 1.0);
  }

  auto p2 = ex::sample_example(ex::Variant::kEx2, 20, 12);
  ProblemPD prob2 = ex::make_pd_problem(p2);
  for (const auto& ip : ex::sample_initial_points(p2, 5, 12))
    CHECK(violation_metrics(prob2, ip.x, ip.y).max_ineq <= 1e-12);

  // Ex4 inits are not constructed to satisfy the coupling
  auto p4 = ex::sample_example(ex::Variant::kEx4, 20, 13);
  ProblemDD prob4 = ex::make_dd_problem(p4);
  bool some_violated = false;
  for (const auto& ip : ex::sample_initial_points(p4, 10, 13)) {
    CHECK(ip.lambda.size() == 1);
    if (violation_metrics(prob4, ip.x).coupling > 1e-3) some_violated = true;
  }
  CHECK(some_violated);

  // determinism
  auto i1 = ex::sample_initial_points(p4, 3, 13);
  auto i2 = ex::sample_initial_points(p4, 3, 13);
  CHECK(i1[2].x.blocks[7][0] == i2[2].x.blocks[7][0]);
}

TEST_CASE("params serialize to json and back") {
  for (auto v : {ex::Variant::kEx1, ex::Variant::kEx6}) {
    auto p = ex::sample_example(v, 5, 21);
    ex::ExampleParams q = ex::params_from_json(ex::to_json(p));
    CHECK(q.variant == p.variant);
    CHECK(q.block_count == p.block_count);
    if (v == ex::Variant::kEx1) {
      CHECK(q.a_global == p.a_global);
      CHECK(q.cv_blocks[3].a[1][2] == p.cv_blocks[3].a[1][2]);
      CHECK(q.cv_blocks[4].c1 == p.cv_blocks[4].c1);
    } else {
      CHECK(q.b_global == p.b_global);
      CHECK(q.cc_blocks[2].b[1] == p.cc_blocks[2].b[1]);
    }
  }
}

TEST_CASE("degenerate c1 is rejected by the closed form") {
  ex::CouplingVarBlock b;
  b.c1 = 0.0;
  CHECK_THROWS_AS(ex::ex1_pd_block(b, 0.5), ex::DegenerateParams);
}

// ---------------------------------------------------------------------------
// examples: criterion and reporting
// ---------------------------------------------------------------------------

namespace {
Trajectory synthetic_traj(std::initializer_list<double> objectives, double viol = 0.0) {
  Trajectory t;
  for (double f : objectives) {
    TrajectoryEntry e;
    e.objective = f;
    e.violations.mean_ineq = viol;
    e.violations.max_ineq = viol;
    e.violations.ineq_coupling = viol;
    e.violations.coupling = viol;
    t.entries.push_back(e);
  }
  return t;
}
}  // namespace

TEST_CASE("convergence criterion windows and thresholds") {
  ex::ConvergenceCriterion c = ex::criterion_for(ex::Variant::kEx2);
  Trajectory flat = synthetic_traj({5, 5, 5, 5, 5, 5, 5, 5, 5, 5, 5});
  CHECK(ex::check_convergence(flat, c));

  Trajectory jump = synthetic_traj({5, 5, 5, 5, 5, 5, 5, 5, 5, 5, 5.5});  // 10% change
  CHECK_FALSE(ex::check_convergence(jump, c));

  Trajectory edge = synthetic_traj({5, 5, 5, 5, 5, 5, 5, 5, 5, 5, 5 * 1.049});
  CHECK(ex::check_convergence(edge, c));  // 4.9% is inside the band

  Trajectory infeasible = synthetic_traj({5, 5, 5, 5, 5, 5, 5, 5, 5, 5, 5}, 1e-4);
  CHECK_FALSE(ex::check_convergence(infeasible, c));

  Trajectory shorttraj = synthetic_traj({5, 5, 5});
  CHECK_THROWS_AS(ex::check_convergence(shorttraj, c), ex::TrajectoryTooShort);
}

TEST_CASE("criterion is monotone in its tolerances") {
  SplitRng rng(31);
  for (int t = 0; t < 200; ++t) {
    Trajectory traj;
    for (int k = 0; k <= 10; ++k) {
      TrajectoryEntry e;
      e.objective = 5.0 + rng.uniform(-0.3, 0.3);
      double viol = rng.uniform(0, 2e-5);
      e.violations.mean_ineq = viol;
      e.violations.max_ineq = viol * rng.uniform(1, 3);
      e.violations.ineq_coupling = e.violations.max_ineq;
      traj.entries.push_back(e);
    }
    ex::ConvergenceCriterion loose = ex::criterion_for(ex::Variant::kEx2);
    ex::ConvergenceCriterion tight = loose;
    tight.mean_ineq_tol *= rng.uniform(0.1, 1.0);
    tight.max_ineq_tol *= rng.uniform(0.1, 1.0);
    tight.rel_objective_tol *= rng.uniform(0.1, 1.0);
    if (ex::check_convergence(traj, tight)) CHECK(ex::check_convergence(traj, loose));
  }
}

TEST_CASE("best objective filter and offsets") {
  Trajectory t = synthetic_traj({0, -39.0, -40.5, -40.2});
  ex::BestObjective b = ex::best_objective(t, ex::Variant::kEx4);
  CHECK(b.found);
  CHECK(b.value == doctest::Approx(0.5));  // -40.5 + 41
  CHECK(b.iteration == 2);

  Trajectory infeasible = synthetic_traj({0, -1, -2}, 1.0);
  CHECK_FALSE(ex::best_objective(infeasible, ex::Variant::kEx4).found);

  Trajectory pdtraj = synthetic_traj({9, 7, 8});
  ex::BestObjective bp = ex::best_objective(pdtraj, ex::Variant::kEx1);
  CHECK(bp.value == doctest::Approx(7.0));  // offset 0, initial entry excluded
}

// ---------------------------------------------------------------------------
// transforms
// ---------------------------------------------------------------------------

TEST_CASE("pd_to_dd shapes for the smallest instance") {
  ProblemPD p;
  p.block_count = 1;
  p.y_dim = 1;
  p.block_dims = {1};
  BivariateFunction f;
  f.value = [](const VectorXd& x, const VectorXd& y) { return x[0] + y[0]; };
  f.grad_x = [](const VectorXd&, const VectorXd&) { return v1(1.0); };
  f.grad_y = [](const VectorXd&, const VectorXd&) { return v1(1.0); };
  p.f = {f};
  p.g_coupled = {empty_bivariate_map()};
  p.h_coupled = {empty_bivariate_map()};
  p.g_block = {empty_vector_oracle(1)};
  p.x_sets = {BoxSet::interval(-1, 1)};
  p.f0.dim = 1;
  p.f0.value = [](const VectorXd& y) { return y[0] * y[0]; };
  p.f0.grad = [](const VectorXd& y) { return v1(2 * y[0]); };
  p.g0 = empty_vector_oracle(1);
  p.y_set = BoxSet::interval(0, 1);

  PdToDd t = pd_to_dd(p);
  CHECK(t.lifted.block_count == 2);
  CHECK((t.z_dims == std::vector<int>{1, 2}));
  CHECK(t.consensus_rows == 1);
  CHECK(t.lifted_eq_rows == 0);

  // consensus row: block 0 contributes -z0, block 1 contributes its y copy
  VectorXd h0 = t.lifted.h_coupled[0].value(v1(0.4));
  CHECK(h0[0] == doctest::Approx(-0.4));
  VectorXd z1(2);
  z1 << 0.2, 0.4;
  CHECK(t.lifted.h_coupled[1].value(z1)[0] == doctest::Approx(0.4));

  // a feasible pd point lifts to a feasible dd point
  BlockVector z = lift_point(t, BlockVector({v1(0.2)}), v1(0.4));
  CHECK(violation_metrics(t.lifted, z).coupling <= 1e-14);
}

TEST_CASE("transform certificates preserve stationarity both ways") {
  int done = 0;
  for (std::uint64_t seed = 0; done < 10 && seed < 40; ++seed) {
    auto params = ex::sample_example(ex::Variant::kEx1, 5, 9000 + seed);
    ProblemPD p = ex::make_pd_problem(params);
    PdStationary st = find_pd_stationary(p);
    if (!st.found) continue;
    ++done;
    TransformCertificate cert = map_stationary_pd_to_dd(
        p, st.x, st.y, st.mults, VectorXd::Zero(0), 1e-10);
    CHECK(cert.source_residual <= 1e-10);
    CHECK(cert.image_residual <= 1e-8);
  }
  CHECK(done == 10);

  done = 0;
  for (std::uint64_t seed = 0; done < 10 && seed < 60; ++seed) {
    auto params = ex::sample_example(ex::Variant::kEx4, 5, 9100 + seed);
    ProblemDD p = ex::make_dd_problem(params);
    DdStationary st = find_dd_stationary(p);
    if (!st.found) continue;
    ++done;
    TransformCertificate cert =
        map_stationary_dd_to_pd(p, st.x, st.mu, st.lambda, st.mults, 1e-10);
    CHECK(cert.source_residual <= 1e-10);
    CHECK(cert.image_residual <= 1e-8);

    // backward: read the source point off the lifted one
    DdToPd t = dd_to_pd(p);
    VectorXd lifted = lift_point(t, st.x);
    MultiplierSet lm = lift_multipliers(t, st.x, st.mu, st.lambda, st.mults);
    TransformCertificate back = map_stationary_pd_from_lifted(t, lifted, lm, 1e-8);
    CHECK(back.image_residual <= 1e-8);

    // round trip restores the point exactly
    DdPoint lowered = lower_point(t, lifted, lm);
    CHECK((lowered.x.flatten() - st.x.flatten()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::fabs(back.image_residual - cert.source_residual) <= 1e-10);

    // objective is preserved by the variable map
    CHECK(t.lifted.objective(lifted) == doctest::Approx(objective(p, st.x)).epsilon(1e-12));
  }
  CHECK(done == 10);
}

TEST_CASE("transform rejects non-stationary sources") {
  auto params = ex::sample_example(ex::Variant::kEx1, 3, 9200);
  ProblemPD p = ex::make_pd_problem(params);
  PdStationary st = find_pd_stationary(p);
  if (!st.found) return;
  VectorXd y_bad = v1(std::min(1.0, st.y[0] + 0.2));
  BlockVector x_bad;
  std::vector<MultiplierSet> m_bad;
  for (int i = 0; i < 3; ++i) {
    auto [xi, mi] = solve_subproblem_pd(p, i, y_bad);
    x_bad.blocks.push_back(xi);
    m_bad.push_back(mi);
  }
  CHECK_THROWS_AS(
      map_stationary_pd_to_dd(p, x_bad, y_bad, m_bad, VectorXd::Zero(0), 1e-10),
      NotStationary);
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

TEST_CASE("table defaults match the benchmark defaults") {
  auto pd3 = bn::default_params(bn::Algorithm::kPd, 3);
  CHECK(pd3.tau == 5.0);
  CHECK(pd3.beta == 5.0);
  auto dd4 = bn::default_params(bn::Algorithm::kDd, 4);
  CHECK(dd4.tau == 8.0);
  CHECK(dd4.gamma0 == 0.01);
  CHECK(dd4.epsilon == 0.9);
  auto sdd6 = bn::default_params(bn::Algorithm::kSdd, 6);
  CHECK(sdd6.tau == 0.1);
  CHECK(sdd6.gamma_in0 == 0.001);
  CHECK(sdd6.beta_in == 0.9);
  CHECK(sdd6.curvature_l == 0.1);
  auto spd2 = bn::default_params(bn::Algorithm::kSpd, 2);
  CHECK(spd2.tau_x == 1e8);
  CHECK(spd2.sigma == 0.05);
  CHECK(spd2.inner_t == 10);
}

TEST_CASE("applicability matrix") {
  CHECK(bn::applicable(bn::Algorithm::kPd, 1));
  CHECK_FALSE(bn::applicable(bn::Algorithm::kPd, 4));
  CHECK(bn::applicable(bn::Algorithm::kSpd, 3));
  CHECK_FALSE(bn::applicable(bn::Algorithm::kSpd, 1));
  CHECK(bn::applicable(bn::Algorithm::kDd, 6));
  CHECK_FALSE(bn::applicable(bn::Algorithm::kDd, 2));
  CHECK(bn::applicable(bn::Algorithm::kSdd, 5));
  CHECK_FALSE(bn::applicable(bn::Algorithm::kSdd, 4));

  bn::RunConfig cfg;
  cfg.example = 1;
  cfg.algorithm = bn::Algorithm::kSpd;
  CHECK_THROWS_AS(cfg.validate(), bn::ConfigError);
}

TEST_CASE("experiment rows, aggregation, and determinism") {
  bn::RunConfig cfg;
  cfg.example = 4;
  cfg.algorithm = bn::Algorithm::kDd;
  cfg.blocks = 20;
  cfg.samples = 3;
  cfg.inits = 3;
  cfg.seed = 7;
  cfg.record_time = false;
  bn::RunReport rep = bn::run_experiment(cfg);
  REQUIRE(rep.total() == 9);
  int conv = 0;
  for (const auto& r : rep.rows) conv += r.converged ? 1 : 0;
  CHECK(rep.convergent() == conv);
  CHECK(rep.proportion() == doctest::Approx(conv / 9.0));

  std::string csv1 = bn::format_report(rep, cfg);
  cfg.parallelism = 8;
  std::string csv8 = bn::format_report(bn::run_experiment(cfg), cfg);
  CHECK(csv1 == csv8);
  CHECK(std::count(csv1.begin(), csv1.end(), '\n') == 11);  // header + 9 rows + aggregate

  bn::RunReport empty;
  bn::RunConfig ecfg = cfg;
  std::string ecsv = bn::format_report(empty, ecfg);
  CHECK(ecsv.rfind("sample,init,converged,best_objective,time_to_best_s,iterations\n", 0) == 0);
  CHECK(std::count(ecsv.begin(), ecsv.end(), '\n') == 2);
}

TEST_CASE("config files round trip and validate") {
  std::string path = (std::filesystem::temp_directory_path() / "decomp_cfg_test.json").string();
  {
    std::ofstream out(path);
    out << R"({"example": 5, "algorithm": "sdd", "blocks": 12, "samples": 2, "inits": 2,
               "seed": 3, "params": {"tau": 0.5, "L": 0.2}, "record_time": false})";
  }
  bn::RunConfig cfg = bn::config_from_json_file(path);
  CHECK(cfg.example == 5);
  CHECK(cfg.algorithm == bn::Algorithm::kSdd);
  CHECK(cfg.blocks == 12);
  CHECK(cfg.params.tau == 0.5);
  CHECK(cfg.params.curvature_l == 0.2);
  CHECK(cfg.params.gamma_in0 == 1.0);  // untouched defaults stay at Table values
  std::filesystem::remove(path);

  CHECK_THROWS_AS(bn::config_from_json_file("/nonexistent/cfg.json"), bn::IoError);
}

TEST_CASE("cli subcommands and exit codes") {
  std::string out_csv = (std::filesystem::temp_directory_path() / "decomp_cli_test.csv").string();
  {
    const char* argv[] = {"decomp_cli", "run",      "--example", "4",  "--algorithm", "dd",
                          "--blocks",   "10",       "--samples", "2",  "--inits",     "2",
                          "--seed",     "7",        "--out",     out_csv.c_str(),
                          "--no-times", "--max-outer", "10"};
    CHECK(bn::cli_main(static_cast<int>(std::size(argv)), argv) == 0);
    std::ifstream in(out_csv);
    REQUIRE(in.good());
    int lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 6);  // header + 4 rows + aggregate
  }
  std::filesystem::remove(out_csv);

  const char* bad_alg[] = {"decomp_cli", "run", "--example", "4", "--algorithm", "nope"};
  CHECK(bn::cli_main(6, bad_alg) == 1);

  const char* incompatible[] = {"decomp_cli", "run", "--example", "1", "--algorithm", "spd"};
  CHECK(bn::cli_main(6, incompatible) == 1);

  const char* missing_cfg[] = {"decomp_cli", "run", "--config", "/nonexistent/x.json"};
  CHECK(bn::cli_main(4, missing_cfg) == 2);
}

TEST_CASE("plot data files are written on request") {
  bn::RunConfig cfg;
  cfg.example = 5;
  cfg.algorithm = bn::Algorithm::kDd;
  cfg.blocks = 8;
  cfg.samples = 1;
  cfg.inits = 2;
  cfg.seed = 2;
  cfg.plot_dir = (std::filesystem::temp_directory_path() / "decomp_plots").string();
  bn::run_experiment(cfg);
  std::ifstream in(cfg.plot_dir + "/trial_s0_i1.dat");
  REQUIRE(in.good());
  int k;
  double f;
  REQUIRE(static_cast<bool>(in >> k >> f));
  CHECK(k == 0);
  std::filesystem::remove_all(cfg.plot_dir);
}

TEST_CASE("a degenerate master without curvature is rejected") {
  auto params = ex::sample_example(ex::Variant::kEx1, 2, 33);
  params.a_global = 0.0;  // f0 flat: the tau=0 master has no unique optimum
  ProblemPD p = ex::make_pd_problem(params);
  CHECK_THROWS_AS(solve_approx_master(p, v1(0.5), v1(1.0), 0.0), ex::DegenerateParams);
  // a positive proximal weight restores strong convexity
  CHECK(solve_approx_master(p, v1(0.5), v1(0.0), 2.0)[0] == doctest::Approx(0.5));
}
