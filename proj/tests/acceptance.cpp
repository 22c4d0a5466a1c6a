// Acceptance suite: one pass/fail line per criterion, exit 0 only if all
// criteria hold.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "decomp/bench.hpp"
#include "decomp/dd.hpp"
#include "decomp/pd.hpp"
#include "decomp/rng.hpp"
#include "decomp/sdd.hpp"
#include "decomp/spd.hpp"
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

struct Outcome {
  int id;
  std::string title;
  bool pass;
  std::string detail;
  double seconds;
};

std::vector<Outcome> g_outcomes;

template <typename Fn>
void run_criterion(int id, const std::string& title, Fn&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  o.id = id;
  o.title = title;
  try {
    auto [pass, detail] = fn();
    o.pass = pass;
    o.detail = detail;
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  g_outcomes.push_back(o);
  std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
              o.seconds, o.detail.empty() ? "" : " -- ", o.detail.c_str());
  std::fflush(stdout);
}

double f_dagger(const ProblemPD& p, const VectorXd& y) {
  double v = p.f0.value(y);
  for (int i = 0; i < p.block_count; ++i)
    v += p.f[static_cast<size_t>(i)].value(p.block_solver(i, y), y);
  return v;
}

// --------------------------------------------------------------------------
// 1. Envelope gradient.
// --------------------------------------------------------------------------
std::pair<bool, std::string> envelope_gradient() {
  double worst = 0.0;
  int cases = 0;
  for (auto variant : {ex::Variant::kEx1, ex::Variant::kEx2}) {
    for (int blocks : {2, 5}) {
      for (int inst = 0; inst < 5; ++inst) {
        std::uint64_t seed = 11000 + 100 * static_cast<int>(variant) + 10 * blocks +
                             static_cast<unsigned>(inst);
        auto params = ex::sample_example(variant, blocks, seed);
        ProblemPD p = ex::make_pd_problem(params);
        SplitRng rng(seed, {0xACC});
        VectorXd y = v1(rng.uniform(0.05, 0.95));
        VectorXd grad = p.f0.grad(y);
        for (int i = 0; i < blocks; ++i) {
          auto [xi, mi] = solve_subproblem_pd(p, i, y);
          grad += master_gradient_block(p, i, y, xi, mi);
        }
        const double h = 1e-5;
        double fd = (f_dagger(p, v1(y[0] + h)) - f_dagger(p, v1(y[0] - h))) / (2 * h);
        double rel = std::fabs(grad[0] - fd) / std::max({1.0, std::fabs(fd), std::fabs(grad[0])});
        worst = std::max(worst, rel);
        ++cases;
      }
    }
  }
  std::ostringstream d;
  d << cases << " instances, worst rel err " << worst;
  return {worst <= 1e-4, d.str()};
}

// --------------------------------------------------------------------------
// 2. Dual envelope gradient.
// --------------------------------------------------------------------------
std::pair<bool, std::string> dual_envelope_gradient() {
  double worst = 0.0;
  int cases = 0;
  for (int blocks : {2, 5}) {
    for (int inst = 0; inst < 10; ++inst) {
      std::uint64_t seed = 12000 + 10 * blocks + static_cast<unsigned>(inst);
      auto params = ex::sample_example(ex::Variant::kEx4, blocks, seed);
      ProblemDD p = ex::make_dd_problem(params);
      SplitRng rng(seed, {0xACD});
      VectorXd mu(0), lambda = v1(rng.uniform(-0.5, 0.5));
      BlockVector x;
      for (int i = 0; i < blocks; ++i) x.blocks.push_back(p.block_solver(i, mu, lambda, nullptr));
      auto [gmu, glam] = dual_gradients(p, x);

      auto q_at = [&](double l) {
        BlockVector warm = x;  // branch-tracked re-solves
        double v = 0;
        for (int i = 0; i < blocks; ++i) {
          VectorXd xi = p.block_solver(i, mu, v1(l), &warm.blocks[static_cast<size_t>(i)]);
          v += partial_lagrangian(p, i, xi, mu, v1(l));
        }
        return v;
      };
      double fd = oracle::fd_derivative(q_at, lambda[0]);
      double rel = std::fabs(glam[0] - fd) / std::max({1.0, std::fabs(fd), std::fabs(glam[0])});
      worst = std::max(worst, rel);
      ++cases;
    }
  }
  std::ostringstream d;
  d << cases << " instances, worst rel err " << worst;
  return {worst <= 1e-3, d.str()};
}

// --------------------------------------------------------------------------
// 3. Closed-form solver oracle equivalence.
// --------------------------------------------------------------------------
double cv_block_value(const ex::CouplingVarBlock& b, bool quintic, bool equality, double y,
                      double x1) {
  double fx = 0;
  for (int j = 1; j <= 3; ++j) {
    const double* row = b.a[j - 1];
    double aj = row[0] + row[1] * y + row[2] * y * y;
    fx += aj * std::pow(x1, quintic ? j + 2 : j);
  }
  double s = b.c2 / (y + 1.0);
  auto q = [&](double x2) { return b.b1 * x2 + b.b2 * x2 * x2; };
  if (equality) return fx + q((s * x1 * x1 - b.c0) / b.c1);
  double x2_free = -b.b1 / (2 * b.b2);
  double x2;
  if (b.c1 > 0)
    x2 = std::min(x2_free, (s * x1 * x1 - b.c0) / b.c1);
  else if (b.c1 < 0)
    x2 = std::max(x2_free, (s * x1 * x1 - b.c0) / b.c1);
  else {
    if (-s * x1 * x1 + b.c0 > 0) return std::numeric_limits<double>::infinity();
    x2 = x2_free;
  }
  return fx + q(x2);
}

std::pair<bool, std::string> oracle_equivalence() {
  const int n = 1000;
  int failures = 0;
  double worst = 0.0;
  std::ostringstream d;

  auto record = [&](const char* name, int fails, double w) {
    d << name << ":" << (n - fails) << "/" << n << " ";
    failures += fails;
    worst = std::max(worst, w);
  };

  // ex1_pd and ex2_pd
  for (int variant = 1; variant <= 2; ++variant) {
    int fails = 0;
    double w = 0;
    SplitRng rng(13000 + static_cast<unsigned>(variant));
    for (int t = 0; t < n; ++t) {
      auto params = ex::sample_example(static_cast<ex::Variant>(variant), 1,
                                       13100u + static_cast<unsigned>(variant) * 2000u +
                                           static_cast<unsigned>(t));
      const auto& b = params.cv_blocks[0];
      double y = rng.uniform(0, 1);
      bool equality = variant == 1;
      VectorXd x = equality ? ex::ex1_pd_block(b, y) : ex::ex23_pd_block(b, y, false);
      double mine = cv_block_value(b, false, equality, y, x[0]);
      auto grid = oracle::grid_minimize(
          [&](double x1) { return cv_block_value(b, false, equality, y, x1); }, -1, 1, 1e-4);
      double gap = std::fabs(mine - grid.value);
      w = std::max(w, gap);
      if (gap > 1e-6 || mine > grid.value + 1e-6) ++fails;
    }
    record(variant == 1 ? "ex1_pd" : "ex2_pd", fails, w);
  }

  // ex2_spd and ex3_spd
  for (bool quintic : {false, true}) {
    int fails = 0;
    double w = 0;
    SplitRng rng(13500 + (quintic ? 1 : 0));
    for (int t = 0; t < n; ++t) {
      auto params = ex::sample_example(quintic ? ex::Variant::kEx3 : ex::Variant::kEx2, 1,
                                       13600u + (quintic ? 3000u : 0u) + static_cast<unsigned>(t));
      const auto& b = params.cv_blocks[0];
      VectorXd xa(2);
      xa << rng.uniform(-1, 1), rng.uniform(-1, 1);
      double ya = rng.uniform(0, 1), y = rng.uniform(0, 1);
      const double tau_x = 1e8;
      auto [x, mu] = ex::ex23_spd_block(b, xa, ya, tau_x, y, quintic);
      double dcoef = 0;
      for (int j = 1; j <= 3; ++j) {
        const double* row = b.a[j - 1];
        double aj = row[0] + row[1] * ya + row[2] * ya * ya;
        int pw = quintic ? j + 2 : j;
        dcoef += aj * pw * std::pow(xa[0], pw - 1);
      }
      double phik = -b.c2 * xa[0] * xa[0] / (ya + 1.0);
      double gx = -2 * b.c2 * xa[0] / (ya + 1.0);
      double gy = b.c2 * xa[0] * xa[0] / ((ya + 1.0) * (ya + 1.0));
      double alpha = b.c0 + phik - gx * xa[0] + gy * (y - ya);
      auto value = [&](double x1) {
        double x2_free = -b.b1 / (2 * b.b2);
        double x2;
        if (b.c1 > 0)
          x2 = std::min(x2_free, -(alpha + gx * x1) / b.c1);
        else if (b.c1 < 0)
          x2 = std::max(x2_free, -(alpha + gx * x1) / b.c1);
        else
          x2 = x2_free;
        double dx = x1 - xa[0];
        return dcoef * dx + 0.5 * tau_x * dx * dx + b.b1 * x2 + b.b2 * x2 * x2;
      };
      double dx = x[0] - xa[0];
      double mine = dcoef * dx + 0.5 * tau_x * dx * dx + b.b1 * x[1] + b.b2 * x[1] * x[1];
      auto grid = oracle::grid_minimize(value, -1, 1, 1e-4);
      // scale-aware: tau_x=1e8 makes absolute values huge
      double scale = std::max(1.0, std::fabs(grid.value));
      double gap = std::fabs(mine - grid.value) / scale;
      w = std::max(w, gap);
      if (gap > 1e-6 || mine > grid.value + 1e-6 * scale) ++fails;
    }
    record(quintic ? "ex3_spd" : "ex2_spd", fails, w);
  }

  // ex4_dd, ex5_dd
  for (int variant = 4; variant <= 5; ++variant) {
    int fails = 0;
    double w = 0;
    SplitRng rng(14000 + static_cast<unsigned>(variant));
    for (int t = 0; t < n; ++t) {
      auto params = ex::sample_example(static_cast<ex::Variant>(variant), 1,
                                       14100u + static_cast<unsigned>(variant) * 2000u +
                                           static_cast<unsigned>(t));
      const auto& b = params.cc_blocks[0];
      double mu = rng.uniform(0, 1), lambda = rng.uniform(-1, 1);
      auto variant_e = static_cast<ex::Variant>(variant);
      double x = ex::ex456_dd_block(b, variant_e, mu, lambda, nullptr);
      double wgt = variant == 4 ? lambda : mu;
      auto value = [&](double xx) {
        double f = b.a[0] * xx + b.a[1] * xx * xx + b.a[2] * xx * xx * xx;
        double g = b.b[0] * xx + b.b[1] * xx * xx + b.b[2] * xx * xx * xx;
        return f + wgt * g;
      };
      auto grid = oracle::grid_minimize(value, -0.05, 0.05, 1e-5);
      double gap = std::fabs(value(x) - grid.value);
      w = std::max(w, gap);
      if (gap > 1e-6 || value(x) > grid.value + 1e-6) ++fails;
    }
    record(variant == 4 ? "ex4_dd" : "ex5_dd", fails, w);
  }

  // ex5_sdd and ex6_sdd
  for (bool quintic : {false, true}) {
    int fails = 0;
    double w = 0;
    SplitRng rng(14500 + (quintic ? 1 : 0));
    for (int t = 0; t < n; ++t) {
      auto variant = quintic ? ex::Variant::kEx6 : ex::Variant::kEx5;
      auto params = ex::sample_example(variant, 1,
                                       14600u + (quintic ? 3000u : 0u) + static_cast<unsigned>(t));
      ProblemSDD prob = ex::make_sdd_problem(params);
      SurrogateParams sp;
      sp.tau = quintic ? 0.1 : 1e-5;
      sp.curvature_l = 0.1;
      double anchor = rng.uniform(-0.05, 0.05);
      double mu = rng.uniform(0, 2);
      SDDApprox ap = ex::sdd_builder(params, sp)(prob, BlockVector({v1(anchor)}));
      double x = ap.blocks[0].solver(v1(mu), VectorXd(0))[0];
      auto value = [&](double xx) {
        return ap.blocks[0].f.value(v1(xx)) + mu * ap.blocks[0].g_coupled.value(v1(xx))[0];
      };
      auto grid = oracle::grid_minimize(value, -0.05, 0.05, 1e-6);
      double gap = std::fabs(value(x) - grid.value);
      w = std::max(w, gap);
      if (gap > 1e-6 || value(x) > grid.value + 1e-6) ++fails;
    }
    record(quintic ? "ex6_sdd" : "ex5_sdd", fails, w);
  }

  d << "worst gap " << worst;
  return {failures == 0, d.str()};
}

// --------------------------------------------------------------------------
// 4. Stationarity of convergent runs.
// --------------------------------------------------------------------------
std::pair<bool, std::string> stationarity_of_outputs() {
  struct Pair {
    int example;
    bn::Algorithm alg;
  };
  const std::vector<Pair> pairs = {{1, bn::Algorithm::kPd},  {2, bn::Algorithm::kPd},
                                   {3, bn::Algorithm::kPd},  {2, bn::Algorithm::kSpd},
                                   {3, bn::Algorithm::kSpd}, {4, bn::Algorithm::kDd},
                                   {5, bn::Algorithm::kDd},  {6, bn::Algorithm::kDd},
                                   {5, bn::Algorithm::kSdd}, {6, bn::Algorithm::kSdd}};
  bool ok = true;
  std::ostringstream d;
  for (const auto& pr : pairs) {
    bn::RunConfig cfg;
    cfg.example = pr.example;
    cfg.algorithm = pr.alg;
    cfg.blocks = 50;
    cfg.samples = 3;
    cfg.inits = 3;
    cfg.seed = 0;
    double worst = 0.0;
    int convergent = 0;
    for (int s = 0; s < cfg.samples; ++s)
      for (int i = 0; i < cfg.inits; ++i) {
        Trajectory t = bn::run_single_trial(cfg, s, i, 2);
        if (t.converged) {
          ++convergent;
          worst = std::max(worst, t.final_kkt_residual);
        }
      }
    bool pair_ok = worst <= 1e-3;
    ok = ok && pair_ok;
    d << bn::algorithm_name(pr.alg) << "/ex" << pr.example << (pair_ok ? " ok(" : " FAIL(")
      << convergent << " conv, worst " << worst << ") ";
  }
  return {ok, d.str()};
}

// --------------------------------------------------------------------------
// 5. Convergence-proportion table.
// --------------------------------------------------------------------------
std::pair<bool, std::string> proportion_table() {
  struct Pair {
    int example;
    bn::Algorithm alg;
  };
  const std::vector<Pair> pairs = {{1, bn::Algorithm::kPd},  {2, bn::Algorithm::kPd},
                                   {3, bn::Algorithm::kPd},  {2, bn::Algorithm::kSpd},
                                   {3, bn::Algorithm::kSpd}, {4, bn::Algorithm::kDd},
                                   {5, bn::Algorithm::kDd},  {6, bn::Algorithm::kDd},
                                   {5, bn::Algorithm::kSdd}, {6, bn::Algorithm::kSdd}};
  bool ok = true;
  std::ostringstream d;
  for (const auto& pr : pairs) {
    bn::RunConfig cfg;
    cfg.example = pr.example;
    cfg.algorithm = pr.alg;
    cfg.blocks = 100;
    cfg.samples = 10;
    cfg.inits = 10;
    cfg.seed = 0;
    cfg.parallelism = 2;
    auto t0 = std::chrono::steady_clock::now();
    bn::RunReport rep = bn::run_experiment(cfg);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pair_ok = rep.proportion() >= 0.90 && secs <= 300.0;
    ok = ok && pair_ok;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s/ex%d %.0f%%/%.1fs ", bn::algorithm_name(pr.alg),
                  pr.example, 100 * rep.proportion(), secs);
    d << (pair_ok ? "" : "FAIL:") << buf;
  }
  return {ok, d.str()};
}

// --------------------------------------------------------------------------
// 6. Transform equivalence.
// --------------------------------------------------------------------------
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
  double ystar;
  if (master_grad(lo) > 0)
    ystar = 0.0;
  else if (master_grad(hi) < 0)
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
  if ((flo > 0) == (fhi > 0)) return out;
  bool decreasing = flo > 0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    ((sum_h(mid) > 0) == decreasing ? lo : hi) = mid;
  }
  double lstar = 0.5 * (lo + hi);
  if (std::fabs(sum_h(lstar)) > 1e-11) return out;
  out.mu = VectorXd(0);
  out.lambda = v1(lstar);
  for (int i = 0; i < p.block_count; ++i) {
    VectorXd xi = p.block_solver(i, out.mu, out.lambda, &warm.blocks[static_cast<size_t>(i)]);
    out.x.blocks.push_back(xi);
    Nlp sub = make_dd_subproblem(p, i, out.mu, out.lambda);
    out.mults.push_back(recover_multipliers(sub, xi));
  }
  Nlp full = full_nlp(p);
  MultiplierSet m = assemble_dd_multipliers(p, out.mu, out.lambda, out.mults);
  out.found = kkt_residual(full, out.x.flatten(), m).total() <= 1e-10;
  return out;
}

std::pair<bool, std::string> transform_equivalence() {
  int fwd = 0, bwd = 0;
  double worst_fwd = 0, worst_bwd = 0;
  for (std::uint64_t seed = 0; fwd < 50 && seed < 200; ++seed) {
    auto params = ex::sample_example(ex::Variant::kEx1, 5, 16000 + seed);
    ProblemPD p = ex::make_pd_problem(params);
    PdStationary st = find_pd_stationary(p);
    if (!st.found) continue;
    TransformCertificate cert =
        map_stationary_pd_to_dd(p, st.x, st.y, st.mults, VectorXd::Zero(0), 1e-10);
    worst_fwd = std::max(worst_fwd, cert.image_residual);
    ++fwd;
  }
  for (std::uint64_t seed = 0; bwd < 50 && seed < 400; ++seed) {
    auto params = ex::sample_example(ex::Variant::kEx4, 5, 17000 + seed);
    ProblemDD p = ex::make_dd_problem(params);
    DdStationary st = find_dd_stationary(p);
    if (!st.found) continue;
    TransformCertificate cert = map_stationary_dd_to_pd(p, st.x, st.mu, st.lambda, st.mults, 1e-10);
    DdToPd t = dd_to_pd(p);
    VectorXd lifted = lift_point(t, st.x);
    MultiplierSet lm = lift_multipliers(t, st.x, st.mu, st.lambda, st.mults);
    TransformCertificate back = map_stationary_pd_from_lifted(t, lifted, lm, 1e-8);
    worst_bwd = std::max({worst_bwd, cert.image_residual, back.image_residual});
    ++bwd;
  }
  std::ostringstream d;
  d << "pd->dd " << fwd << " instances worst " << worst_fwd << "; dd->pd(+back) " << bwd
    << " instances worst " << worst_bwd;
  return {fwd == 50 && bwd == 50 && worst_fwd <= 1e-8 && worst_bwd <= 1e-8, d.str()};
}

// --------------------------------------------------------------------------
// 7. Surrogate assumption suite.
// --------------------------------------------------------------------------
std::pair<bool, std::string> surrogate_suite() {
  bool ok = true;
  std::ostringstream d;
  SplitRng rng(18000);

  // Taylor construction: anchoring against the shifted original.
  {
    FunctionOracle f;
    f.dim = 2;
    f.value = [](const VectorXd& v) { return std::sin(v[0]) * std::exp(0.3 * v[1]); };
    f.grad = [&f](const VectorXd& v) { return fd_gradient(f.value, v); };
    VectorXd anchor(2);
    anchor << 0.3, -0.4;
    double f0 = f.value(anchor);
    FunctionOracle shifted = f;
    shifted.value = [f, f0](const VectorXd& v) { return f.value(v) - f0; };
    FunctionOracle t = taylor_quadratic_surrogate(f.grad(anchor), anchor, 1.7);
    SurrogateReport r = verify_surrogate(t, shifted, anchor, {});
    ok = ok && r.touching_err <= 1e-10 && r.gradient_err <= 1e-6;
    d << "taylor(touch " << r.touching_err << ", grad " << r.gradient_err << ") ";
  }

  // DC linearization: 1000-sample majorization.
  {
    FunctionOracle plus;
    plus.dim = 1;
    plus.value = [](const VectorXd& x) { return std::pow(x[0], 4); };
    plus.grad = [](const VectorXd& x) { return v1(4 * std::pow(x[0], 3)); };
    FunctionOracle minus;
    minus.dim = 1;
    minus.value = [](const VectorXd& x) { return x[0] * x[0]; };
    minus.grad = [](const VectorXd& x) { return v1(2 * x[0]); };
    FunctionOracle g;
    g.dim = 1;
    g.value = [](const VectorXd& x) { return std::pow(x[0], 4) - x[0] * x[0]; };
    g.grad = [](const VectorXd& x) { return v1(4 * std::pow(x[0], 3) - 2 * x[0]); };
    std::vector<VectorXd> samples;
    for (int i = 0; i < 1000; ++i) samples.push_back(v1(rng.uniform(-2, 2)));
    SurrogateReport r = verify_surrogate(dc_linearize(plus, minus, v1(0.7)), g, v1(0.7), samples);
    ok = ok && r.touching_err <= 1e-10 && r.gradient_err <= 1e-6 &&
         r.majorization_violations == 0;
    d << "dc(viol " << r.majorization_violations << ") ";
  }

  // Coupling-variable constraint surrogate (the Ex2/Ex3 choice): anchoring
  // asserted, majorization reported (see the spd open question).
  {
    auto params = ex::sample_example(ex::Variant::kEx2, 20, 18100);
    ProblemSPD prob = ex::make_spd_problem(params);
    SurrogateParams sp;
    sp.tau_x = 1e8;
    BlockVector anchors;
    for (int i = 0; i < 20; ++i)
      anchors.blocks.push_back(VectorXd(v1(rng.uniform(-1, 1)).replicate(2, 1)));
    VectorXd ya = v1(rng.uniform(0, 1));
    SPDApprox ap = ex::spd_builder(params, sp)(prob, anchors, ya);
    double touch = 0, graderr = 0;
    int viol = 0;
    for (int i = 0; i < 20; ++i) {
      const auto& blk = params.cv_blocks[static_cast<size_t>(i)];
      const auto& b = ap.blocks[static_cast<size_t>(i)];
      VectorXd xi = anchors.blocks[static_cast<size_t>(i)];
      auto g_orig = [&](double x1, double x2, double y) {
        return -blk.c2 * x1 * x1 / (y + 1.0) + blk.c1 * x2 + blk.c0;
      };
      double G_anchor = b.g_coupled_x.value(xi)[0] + b.c(0, 0) * ya[0];
      touch = std::max(touch, std::fabs(G_anchor - g_orig(xi[0], xi[1], ya[0])));
      VectorXd gx = b.g_coupled_x.grad(xi).col(0);
      VectorXd fdx = fd_gradient(
          [&](const VectorXd& xx) { return v1(g_orig(xx[0], xx[1], ya[0]))[0]; }, xi);
      graderr = std::max(graderr, (gx - fdx).cwiseAbs().maxCoeff());
      double fdy = oracle::fd_derivative(
          [&](double yy) { return g_orig(xi[0], xi[1], yy); }, ya[0]);
      graderr = std::max(graderr, std::fabs(b.c(0, 0) - fdy));
      for (int s = 0; s < 50; ++s) {
        double x1 = rng.uniform(-1, 1), x2 = rng.uniform(-3, 3), y = rng.uniform(0, 1);
        double G = b.g_coupled_x.value(v1(x1).replicate(2, 1).eval())[0];
        VectorXd xs(2);
        xs << x1, x2;
        G = b.g_coupled_x.value(xs)[0] + b.c(0, 0) * y;
        if (G < g_orig(x1, x2, y) - 1e-10) ++viol;
      }
    }
    ok = ok && touch <= 1e-10 && graderr <= 1e-6;
    d << "cv-constraint(touch " << touch << ", grad " << graderr << ", viol " << viol
      << " reported) ";
  }

  // Coupling-constraint majorant (the Ex5/Ex6 choice): anchoring asserted;
  // majorization asserted at a curvature constant dominating the linearized
  // cubic, reported at the benchmark default L=0.1.
  {
    auto params = ex::sample_example(ex::Variant::kEx5, 20, 18200);
    ProblemSDD prob = ex::make_sdd_problem(params);
    double max_b3 = 0;
    for (const auto& b : params.cc_blocks) max_b3 = std::max(max_b3, std::fabs(b.b[2]));
    double adequate = 0.3 * max_b3 + 1e-9;
    double touch = 0, gradeerr = 0;
    int viol_default = 0, viol_adequate = 0;
    for (double L : {0.1, adequate}) {
      SurrogateParams sp;
      sp.tau = 1e-5;
      sp.curvature_l = L;
      BlockVector anchors;
      for (int i = 0; i < 20; ++i) anchors.blocks.push_back(v1(rng.uniform(-0.05, 0.05)));
      SDDApprox ap = ex::sdd_builder(params, sp)(prob, anchors);
      int viol = 0;
      for (int i = 0; i < 20; ++i) {
        const auto& b = ap.blocks[static_cast<size_t>(i)];
        VectorXd xi = anchors.blocks[static_cast<size_t>(i)];
        double G = b.g_coupled.value(xi)[0];
        double g = prob.g_coupled[static_cast<size_t>(i)].value(xi)[0];
        touch = std::max(touch, std::fabs(G - g));
        double Gg = b.g_coupled.grad(xi)(0, 0);
        double gg = prob.g_coupled[static_cast<size_t>(i)].grad(xi)(0, 0);
        gradeerr = std::max(gradeerr, std::fabs(Gg - gg));
        for (int s = 0; s < 50; ++s) {
          VectorXd xs = v1(rng.uniform(-0.05, 0.05));
          if (b.g_coupled.value(xs)[0] <
              prob.g_coupled[static_cast<size_t>(i)].value(xs)[0] - 1e-10)
            ++viol;
        }
      }
      (L == 0.1 ? viol_default : viol_adequate) = viol;
    }
    ok = ok && touch <= 1e-10 && gradeerr <= 1e-6 && viol_adequate == 0;
    d << "cc-majorant(touch " << touch << ", grad " << gradeerr << ", viol@L=" << adequate
      << " " << viol_adequate << ", viol@L=0.1 " << viol_default << " reported)";
  }
  return {ok, d.str()};
}

// --------------------------------------------------------------------------
// 8. Step-schedule witnesses.
// --------------------------------------------------------------------------
std::pair<bool, std::string> schedule_witnesses() {
  bool ok = true;
  std::ostringstream d;
  struct Named {
    const char* name;
    StepSchedule s;
  };
  for (const Named& n : {Named{"pd-ex1", {1.0, 1.0, 5.0, 1.0}}, Named{"pd-ex3", {1.0, 1.0, 5.0, 1.0}},
                         Named{"spd", {1.0, 0.0, 1.0, 0.1}}, Named{"dd-ex4", {0.01, 3.0, 1.0, 0.9}},
                         Named{"dd-ex6", {1.0, 3.0, 1.0, 0.9}}, Named{"sdd", {1.0, 1.0, 1.0, 0.1}}}) {
    bool range_ok = true;
    for (int k = 0; k <= 100000; ++k) {
      double g = outer_step(n.s, k);
      range_ok = range_ok && g > 0.0 && g <= 1.0;
    }
    double crossover = std::pow(2e4 / n.s.beta, 1.0 / n.s.epsilon);
    bool decay_ok = crossover >= 2e9 ||
                    outer_step(n.s, static_cast<int>(crossover) + 1) < 1e-4;
    if (crossover >= 2e9) {
      // formula evaluation at the (enormous) crossover index
      decay_ok = 1.0 / (n.s.alpha + n.s.beta * std::pow(crossover + 1, n.s.epsilon)) < 1e-4;
    }
    const int k0 = 100000;
    double tail = 0.0;
    for (int k = k0 + 1; k <= 2 * k0; ++k) tail += outer_step(n.s, k);
    bool div_ok = tail >= 0.5 / n.s.beta * std::pow(static_cast<double>(k0), 1.0 - n.s.epsilon) * 0.5;
    ok = ok && range_ok && decay_ok && div_ok;
    d << n.name << (range_ok && decay_ok && div_ok ? " ok " : " FAIL ");
  }
  for (InnerStepSchedule s : {InnerStepSchedule{1.0, 0.5}, InnerStepSchedule{0.001, 0.9}}) {
    double g = s.gamma0, sum = 0, sum_half = 0, sum2 = 0, sum2_half = 0;
    bool positive = true;
    const int nn = 2000000;
    for (int t = 0; t < nn; ++t) {
      positive = positive && g > 0;
      sum += g;
      sum2 += g * g;
      if (t == nn / 2) {
        sum_half = sum;
        sum2_half = sum2;
      }
      g = g * (1 - s.beta_in * g);
    }
    bool inner_ok = positive && (sum - sum_half) >= 0.5 * std::log(2.0) / s.beta_in &&
                    (sum2 - sum2_half) < 1e-4;
    ok = ok && inner_ok;
    d << "inner(" << s.gamma0 << "," << s.beta_in << ")" << (inner_ok ? " ok " : " FAIL ");
  }
  return {ok, d.str()};
}

// --------------------------------------------------------------------------
// 9. Determinism.
// --------------------------------------------------------------------------
std::pair<bool, std::string> determinism() {
  namespace fs = std::filesystem;
  bool ok = true;
  std::ostringstream d;
  for (auto [example, alg] : {std::pair<int, bn::Algorithm>{4, bn::Algorithm::kDd},
                              {2, bn::Algorithm::kSpd}}) {
    bn::RunConfig cfg;
    cfg.example = example;
    cfg.algorithm = alg;
    cfg.blocks = 50;
    cfg.samples = 3;
    cfg.inits = 3;
    cfg.seed = 7;
    cfg.record_time = false;
    std::vector<std::string> outputs;
    for (int par : {1, 4, 8, 4}) {  // the second 4 is the repeat run
      cfg.parallelism = par;
      outputs.push_back(bn::format_report(bn::run_experiment(cfg), cfg));
    }
    bool same = outputs[0] == outputs[1] && outputs[1] == outputs[2] && outputs[2] == outputs[3];
    ok = ok && same;
    d << bn::algorithm_name(alg) << "/ex" << example << (same ? " identical " : " DIFFERS ");
  }
  return {ok, d.str()};
}

}  // namespace

int main() {
  std::printf("acceptance suite, protocol seed 0\n");
  run_criterion(1, "envelope gradient matches finite differences", envelope_gradient);
  run_criterion(2, "dual envelope gradient matches finite differences", dual_envelope_gradient);
  run_criterion(3, "closed-form solvers match the grid oracle", oracle_equivalence);
  run_criterion(4, "convergent runs end stationary (KKT <= 1e-3)", stationarity_of_outputs);
  run_criterion(5, "convergence proportions >= 90% at I=100", proportion_table);
  run_criterion(6, "transform certificates preserve stationarity", transform_equivalence);
  run_criterion(7, "surrogate anchoring and majorization", surrogate_suite);
  run_criterion(8, "step-schedule witnesses", schedule_witnesses);
  run_criterion(9, "byte-identical reports across parallelism", determinism);
  run_criterion(10, "full-scale baseline comparisons are out of scope (documented, no executable check)",
                []() { return std::make_pair(true, std::string("see README")); });

  int failed = 0;
  for (const auto& o : g_outcomes) failed += o.pass ? 0 : 1;
  std::printf("summary: %zu criteria, %d failed\n", g_outcomes.size(), failed);
  return failed == 0 ? 0 : 1;
}
