#include "decomp/examples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "decomp/pd.hpp"
#include "decomp/poly.hpp"
#include "decomp/rng.hpp"

namespace decomp::examples {

namespace {

constexpr std::uint64_t kTagBlocks = 0xB10C;
constexpr std::uint64_t kTagGlobal = 0x610B;
constexpr std::uint64_t kTagInit = 0x1217;

bool quintic_powers(Variant v) { return v == Variant::kEx3 || v == Variant::kEx6; }

// a_j(y) = a[j-1][0] + a[j-1][1] y + a[j-1][2] y^2, j = 1..3.
double coef_a(const CouplingVarBlock& b, int j, double y) {
  const double* r = b.a[j - 1];
  return r[0] + r[1] * y + r[2] * y * y;
}
double coef_a_dy(const CouplingVarBlock& b, int j, double y) {
  const double* r = b.a[j - 1];
  return r[1] + 2.0 * r[2] * y;
}

int power_of(int j, bool quintic) { return quintic ? j + 2 : j; }

// x1-part of f_i and its partials.
double fx1_value(const CouplingVarBlock& b, bool quintic, double y, double x1) {
  double v = 0.0;
  for (int j = 1; j <= 3; ++j) v += coef_a(b, j, y) * std::pow(x1, power_of(j, quintic));
  return v;
}
double fx1_dx1(const CouplingVarBlock& b, bool quintic, double y, double x1) {
  double v = 0.0;
  for (int j = 1; j <= 3; ++j) {
    int p = power_of(j, quintic);
    v += coef_a(b, j, y) * p * std::pow(x1, p - 1);
  }
  return v;
}
double fx1_dy(const CouplingVarBlock& b, bool quintic, double y, double x1) {
  double v = 0.0;
  for (int j = 1; j <= 3; ++j) v += coef_a_dy(b, j, y) * std::pow(x1, power_of(j, quintic));
  return v;
}

// x1-part as ascending polynomial coefficients in x1 for fixed y.
std::vector<double> fx1_poly(const CouplingVarBlock& b, bool quintic, double y) {
  std::vector<double> c(quintic ? 6 : 4, 0.0);
  for (int j = 1; j <= 3; ++j) c[static_cast<size_t>(power_of(j, quintic))] = coef_a(b, j, y);
  return c;
}

// Coupled constraint -c2 x1^2/(y+1) + c1 x2 + c0.
double cons_value(const CouplingVarBlock& b, double y, double x1, double x2) {
  return -b.c2 * x1 * x1 / (y + 1.0) + b.c1 * x2 + b.c0;
}

VectorXd vec1(double v) {
  VectorXd x(1);
  x[0] = v;
  return x;
}

double cc_f_value(const CouplingConsBlock& b, bool quintic, double x) {
  double v = 0.0;
  for (int j = 1; j <= 3; ++j) v += b.a[j - 1] * std::pow(x, power_of(j, quintic));
  return v;
}
double cc_f_grad(const CouplingConsBlock& b, bool quintic, double x) {
  double v = 0.0;
  for (int j = 1; j <= 3; ++j) {
    int p = power_of(j, quintic);
    v += b.a[j - 1] * p * std::pow(x, p - 1);
  }
  return v;
}
double cc_g_value(const CouplingConsBlock& b, double x, double b_over_i) {
  return b.b[0] * x + b.b[1] * x * x + b.b[2] * x * x * x + b_over_i;
}
double cc_g_grad(const CouplingConsBlock& b, double x) {
  return b.b[0] + 2.0 * b.b[1] * x + 3.0 * b.b[2] * x * x;
}

}  // namespace

ExampleParams sample_example(Variant v, int block_count, std::uint64_t seed) {
  if (block_count < 1) throw DegenerateParams("sample_example: block count must be >= 1");
  ExampleParams p;
  p.variant = v;
  p.block_count = block_count;
  p.seed = seed;

  if (coupling_variable_family(v)) {
    p.cv_blocks.resize(static_cast<size_t>(block_count));
    for (int i = 0; i < block_count; ++i) {
      SplitRng rng(seed, {kTagBlocks, static_cast<std::uint64_t>(i)});
      CouplingVarBlock& b = p.cv_blocks[static_cast<size_t>(i)];
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) b.a[j][l] = rng.normal();
      b.b1 = rng.normal();
      b.b2 = rng.uniform(0.0, 5000.0);
      b.c0 = rng.normal();
      b.c1 = rng.normal();
      // c1 = 0 breaks the x2 elimination; measure-zero, redraw if hit.
      while (b.c1 == 0.0) b.c1 = rng.normal();
      b.c2 = rng.half_normal();
    }
    SplitRng rng(seed, {kTagGlobal});
    p.a_global = rng.uniform(0.0, 5000.0);
    p.y0 = rng.uniform(0.0, 1.0);
  } else {
    p.cc_blocks.resize(static_cast<size_t>(block_count));
    for (int i = 0; i < block_count; ++i) {
      SplitRng rng(seed, {kTagBlocks, static_cast<std::uint64_t>(i)});
      CouplingConsBlock& b = p.cc_blocks[static_cast<size_t>(i)];
      for (int j = 0; j < 3; ++j) b.a[j] = rng.normal();
      for (int j = 0; j < 3; ++j) b.b[j] = rng.normal();
    }
    SplitRng rng(seed, {kTagGlobal});
    p.b_global = (v == Variant::kEx4) ? 0.001 * rng.normal() : rng.uniform(-0.001, 0.0);
  }
  return p;
}

std::string to_json(const ExampleParams& p) {
  nlohmann::json j;
  j["variant"] = static_cast<int>(p.variant);
  j["blocks"] = p.block_count;
  j["seed"] = p.seed;
  if (coupling_variable_family(p.variant)) {
    j["a_global"] = p.a_global;
    j["y0"] = p.y0;
    auto& arr = j["block_coefficients"] = nlohmann::json::array();
    for (const auto& b : p.cv_blocks) {
      nlohmann::json e;
      e["a"] = {{b.a[0][0], b.a[0][1], b.a[0][2]},
                {b.a[1][0], b.a[1][1], b.a[1][2]},
                {b.a[2][0], b.a[2][1], b.a[2][2]}};
      e["b"] = {b.b1, b.b2};
      e["c"] = {b.c0, b.c1, b.c2};
      arr.push_back(e);
    }
  } else {
    j["b_global"] = p.b_global;
    auto& arr = j["block_coefficients"] = nlohmann::json::array();
    for (const auto& b : p.cc_blocks) {
      nlohmann::json e;
      e["a"] = {b.a[0], b.a[1], b.a[2]};
      e["b"] = {b.b[0], b.b[1], b.b[2]};
      arr.push_back(e);
    }
  }
  return j.dump(2);
}

ExampleParams params_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExampleParams p;
  p.variant = static_cast<Variant>(j.at("variant").get<int>());
  p.block_count = j.at("blocks").get<int>();
  p.seed = j.at("seed").get<std::uint64_t>();
  if (coupling_variable_family(p.variant)) {
    p.a_global = j.at("a_global").get<double>();
    p.y0 = j.at("y0").get<double>();
    for (const auto& e : j.at("block_coefficients")) {
      CouplingVarBlock b;
      for (int r = 0; r < 3; ++r)
        for (int l = 0; l < 3; ++l) b.a[r][l] = e.at("a")[static_cast<size_t>(r)][static_cast<size_t>(l)].get<double>();
      b.b1 = e.at("b")[0].get<double>();
      b.b2 = e.at("b")[1].get<double>();
      b.c0 = e.at("c")[0].get<double>();
      b.c1 = e.at("c")[1].get<double>();
      b.c2 = e.at("c")[2].get<double>();
      p.cv_blocks.push_back(b);
    }
  } else {
    p.b_global = j.at("b_global").get<double>();
    for (const auto& e : j.at("block_coefficients")) {
      CouplingConsBlock b;
      for (int r = 0; r < 3; ++r) b.a[r] = e.at("a")[static_cast<size_t>(r)].get<double>();
      for (int r = 0; r < 3; ++r) b.b[r] = e.at("b")[static_cast<size_t>(r)].get<double>();
      p.cc_blocks.push_back(b);
    }
  }
  return p;
}

std::vector<InitialPoint> sample_initial_points(const ExampleParams& p, int count,
                                                std::uint64_t seed) {
  std::vector<InitialPoint> out;
  out.reserve(static_cast<size_t>(count));
  for (int j = 0; j < count; ++j) {
    InitialPoint ip;
    SplitRng top(seed, {kTagInit, static_cast<std::uint64_t>(j)});
    if (coupling_variable_family(p.variant)) {
      double y = top.uniform(0.0, 1.0);
      ip.y = vec1(y);
      ip.mu.resize(p.block_count);
      ip.lambda.resize(p.block_count);
      for (int i = 0; i < p.block_count; ++i) {
        SplitRng rng(seed, {kTagInit, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(i)});
        const CouplingVarBlock& b = p.cv_blocks[static_cast<size_t>(i)];
        double x1 = rng.uniform(-1.0, 1.0);
        ip.lambda[i] = rng.uniform(-1.0, 1.0);
        ip.mu[i] = rng.uniform(0.0, 1.0);
        // Equality examples need x2 solved from the constraint; inequality
        // examples only need feasibility, so the free x2 minimizer is
        // clamped onto the feasible halfline.
        double boundary = (b.c2 * x1 * x1 / (y + 1.0) - b.c0) / b.c1;
        double x2 = boundary;
        if (p.variant != Variant::kEx1) {
          double x2_free = -b.b1 / (2.0 * b.b2);
          x2 = (b.c1 > 0.0) ? std::min(x2_free, boundary) : std::max(x2_free, boundary);
        }
        VectorXd xi(2);
        xi << x1, x2;
        ip.x.blocks.push_back(xi);
      }
    } else {
      if (p.variant == Variant::kEx4) {
        ip.lambda = vec1(top.uniform(-1.0, 1.0));
        ip.mu.resize(0);
      } else {
        ip.mu = vec1(top.uniform(0.0, 1.0));
        ip.lambda.resize(0);
      }
      for (int i = 0; i < p.block_count; ++i) {
        SplitRng rng(seed, {kTagInit, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(i)});
        ip.x.blocks.push_back(vec1(rng.uniform(-0.05, 0.05)));
      }
    }
    out.push_back(std::move(ip));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form block solvers.
// ---------------------------------------------------------------------------

VectorXd ex1_pd_block(const CouplingVarBlock& blk, double y) {
  if (blk.c1 == 0.0) throw DegenerateParams("ex1 block: c1 = 0, cannot eliminate x2");
  const double s = blk.c2 / (y + 1.0);
  const double pp = s / blk.c1;
  const double qq = -blk.c0 / blk.c1;
  // Quartic in x1 after eliminating x2 = pp x1^2 + qq.
  std::vector<double> c(5, 0.0);
  c[0] = blk.b1 * qq + blk.b2 * qq * qq;
  c[1] = coef_a(blk, 1, y);
  c[2] = coef_a(blk, 2, y) + blk.b1 * pp + 2.0 * blk.b2 * pp * qq;
  c[3] = coef_a(blk, 3, y);
  c[4] = blk.b2 * pp * pp;
  IntervalMinimum m = minimize_poly_on_interval(c, -1.0, 1.0);
  VectorXd x(2);
  x << m.x, pp * m.x * m.x + qq;
  return x;
}

VectorXd ex23_pd_block(const CouplingVarBlock& blk, double y, bool quintic) {
  const double s = blk.c2 / (y + 1.0);  // >= 0
  const double x2_free = -blk.b1 / (2.0 * blk.b2);
  const double v_free = blk.b1 * x2_free + blk.b2 * x2_free * x2_free;
  std::vector<double> base = fx1_poly(blk, quintic, y);

  struct Candidate {
    double x1, x2, value;
  };
  std::vector<Candidate> cands;
  auto consider_free = [&](double lo, double hi) {
    if (lo > hi) return;
    std::vector<double> c = base;
    c[0] += v_free;
    IntervalMinimum m = minimize_poly_on_interval(c, lo, hi);
    cands.push_back({m.x, x2_free, m.value});
  };

  if (blk.c1 == 0.0) {
    // Constraint reduces to s x1^2 >= c0; x2 stays at its free optimum.
    if (blk.c0 <= 0.0) {
      consider_free(-1.0, 1.0);
    } else if (s > 0.0 && blk.c0 / s <= 1.0) {
      double r = std::sqrt(blk.c0 / s);
      consider_free(-1.0, -r);
      consider_free(r, 1.0);
    } else {
      throw SubproblemInfeasible("ex2 block: constraint cannot be satisfied on the box");
    }
  } else {
    const double pp = s / blk.c1;
    const double qq = -blk.c0 / blk.c1;
    std::vector<double> act = base;  // x2 pinned to the constraint boundary
    if (act.size() < 5) act.resize(5, 0.0);
    act[0] += blk.b1 * qq + blk.b2 * qq * qq;
    act[2] += blk.b1 * pp + 2.0 * blk.b2 * pp * qq;
    act[4] += blk.b2 * pp * pp;
    auto consider_active = [&](double lo, double hi) {
      if (lo > hi) return;
      IntervalMinimum m = minimize_poly_on_interval(act, lo, hi);
      cands.push_back({m.x, pp * m.x * m.x + qq, m.value});
    };

    if (s == 0.0) {
      // Constant boundary: the inequality binds everywhere or nowhere.
      bool binds = (blk.c1 > 0.0) ? (x2_free > qq) : (x2_free < qq);
      if (binds)
        consider_active(-1.0, 1.0);
      else
        consider_free(-1.0, 1.0);
    } else {
      double theta = (blk.c1 * x2_free + blk.c0) / s;  // binds iff x1^2 < theta
      if (theta <= 0.0) {
        consider_free(-1.0, 1.0);
      } else {
        double r = std::sqrt(theta);
        if (r >= 1.0) {
          consider_active(-1.0, 1.0);
        } else {
          consider_active(-r, r);
          consider_free(-1.0, -r);
          consider_free(r, 1.0);
        }
      }
    }
  }

  const Candidate* best = nullptr;
  for (const auto& c : cands)
    if (!best || c.value < best->value - 1e-12 ||
        (c.value < best->value + 1e-12 && c.x1 < best->x1))
      best = &c;
  VectorXd x(2);
  x << best->x1, best->x2;
  return x;
}

std::pair<VectorXd, double> ex23_spd_block(const CouplingVarBlock& blk, const VectorXd& anchor_x,
                                           double anchor_y, double tau_x, double y, bool quintic) {
  const double x1k = anchor_x[0];
  const double d = fx1_dx1(blk, quintic, anchor_y, x1k);
  const double phik = -blk.c2 * x1k * x1k / (anchor_y + 1.0);
  const double gx = -2.0 * blk.c2 * x1k / (anchor_y + 1.0);
  const double gy = blk.c2 * x1k * x1k / ((anchor_y + 1.0) * (anchor_y + 1.0));
  const double alpha = blk.c0 + phik - gx * x1k + gy * (y - anchor_y);
  const double b1 = blk.b1, b2 = blk.b2, c1 = blk.c1;

  auto pack = [](double x1, double x2, double mu) {
    VectorXd x(2);
    x << x1, x2;
    return std::make_pair(x, mu);
  };

  const double x2_free = -b1 / (2.0 * b2);
  if (c1 == 0.0) {
    double x1 = std::clamp(x1k - d / tau_x, -1.0, 1.0);
    if (gx == 0.0) {
      if (alpha > 1e-12) throw SubproblemInfeasible("spd block: constant constraint violated");
      return pack(x1, x2_free, 0.0);
    }
    double bound = -alpha / gx;
    double lo = (gx > 0.0) ? -1.0 : std::max(-1.0, bound);
    double hi = (gx > 0.0) ? std::min(1.0, bound) : 1.0;
    if (lo > hi) throw SubproblemInfeasible("spd block: empty feasible interval");
    double x1c = std::clamp(x1, lo, hi);
    double mu = 0.0;
    if (x1c != x1) mu = std::max(0.0, -(d + tau_x * (x1c - x1k)) / gx);
    return pack(x1c, x2_free, mu);
  }

  // Pattern: constraint inactive.
  {
    double x1 = std::clamp(x1k - d / tau_x, -1.0, 1.0);
    if (gx * x1 + c1 * x2_free + alpha <= 1e-12) return pack(x1, x2_free, 0.0);
  }
  // Pattern: active constraint, x1 interior.
  {
    double denom = gx * gx / tau_x + c1 * c1 / (2.0 * b2);
    double mu = (gx * (x1k - d / tau_x) - c1 * b1 / (2.0 * b2) + alpha) / denom;
    if (mu >= -1e-12) {
      double x1 = x1k - (d + mu * gx) / tau_x;
      if (x1 >= -1.0 - 1e-12 && x1 <= 1.0 + 1e-12)
        return pack(std::clamp(x1, -1.0, 1.0), -(b1 + mu * c1) / (2.0 * b2), std::max(mu, 0.0));
    }
  }
  // Patterns: active constraint with x1 at a box face.
  for (double face : {-1.0, 1.0}) {
    double x2 = -(alpha + gx * face) / c1;
    double mu = -(b1 + 2.0 * b2 * x2) / c1;
    if (mu < -1e-10) continue;
    double slope = d + tau_x * (face - x1k) + mu * gx;
    if ((face < 0.0 && slope >= -1e-8) || (face > 0.0 && slope <= 1e-8))
      return pack(face, x2, std::max(mu, 0.0));
  }
  throw SubproblemInfeasible("spd block: KKT enumeration exhausted");
}

double ex456_dd_block(const CouplingConsBlock& blk, Variant v, double mu, double lambda,
                      const double* warm) {
  const double w = (v == Variant::kEx4) ? lambda : mu;
  std::vector<double> c;
  if (quintic_powers(v)) {
    c = {0.0, w * blk.b[0], w * blk.b[1], blk.a[0] + w * blk.b[2], blk.a[1], blk.a[2]};
  } else {
    c = {0.0, blk.a[0] + w * blk.b[0], blk.a[1] + w * blk.b[1], blk.a[2] + w * blk.b[2]};
  }
  constexpr double kLo = -0.05, kHi = 0.05;
  if (warm) {
    std::vector<double> mins = poly_local_minimizers(c, kLo, kHi);
    if (!mins.empty()) {
      double best = mins[0];
      for (double m : mins)
        if (std::fabs(m - *warm) < std::fabs(best - *warm)) best = m;
      return best;
    }
  }
  return minimize_poly_on_interval(c, kLo, kHi).x;
}

double ex56_sdd_block(const CouplingConsBlock& blk, Variant v, double anchor, double tau,
                      double curvature_l, double mu) {
  const double xk = anchor;
  double quad, lin;
  if (quintic_powers(v)) {
    double df = cc_f_grad(blk, true, xk);
    quad = 0.5 * tau;
    lin = df - tau * xk;
  } else {
    lin = 3.0 * blk.a[2] * xk * xk + blk.a[0];
    if (blk.a[1] > 0.0) {
      quad = blk.a[1];
    } else {
      quad = 0.5 * tau;
      lin += -tau * xk + 2.0 * blk.a[1] * xk;
    }
  }
  double gquad = 0.5 * curvature_l + (blk.b[1] > 0.0 ? blk.b[1] : 0.0);
  double glin = 3.0 * blk.b[2] * xk * xk - curvature_l * xk + blk.b[0] +
                (blk.b[1] > 0.0 ? 0.0 : 2.0 * blk.b[1] * xk);
  quad += mu * gquad;
  lin += mu * glin;
  return std::clamp(-lin / (2.0 * quad), -0.05, 0.05);
}

// ---------------------------------------------------------------------------
// Problem builders.
// ---------------------------------------------------------------------------

ProblemPD make_pd_problem(const ExampleParams& p) {
  if (!coupling_variable_family(p.variant))
    throw DegenerateParams("make_pd_problem needs a coupling-variable example");
  const bool quintic = quintic_powers(p.variant);
  const bool equality = p.variant == Variant::kEx1;

  ProblemPD prob;
  prob.block_count = p.block_count;
  prob.y_dim = 1;
  prob.block_dims.assign(static_cast<size_t>(p.block_count), 2);
  prob.y_set = BoxSet::interval(0.0, 1.0);

  for (int i = 0; i < p.block_count; ++i) {
    const CouplingVarBlock blk = p.cv_blocks[static_cast<size_t>(i)];
    BivariateFunction f;
    f.value = [blk, quintic](const VectorXd& x, const VectorXd& y) {
      return fx1_value(blk, quintic, y[0], x[0]) + blk.b1 * x[1] + blk.b2 * x[1] * x[1];
    };
    f.grad_x = [blk, quintic](const VectorXd& x, const VectorXd& y) {
      VectorXd g(2);
      g << fx1_dx1(blk, quintic, y[0], x[0]), blk.b1 + 2.0 * blk.b2 * x[1];
      return g;
    };
    f.grad_y = [blk, quintic](const VectorXd& x, const VectorXd& y) {
      return vec1(fx1_dy(blk, quintic, y[0], x[0]));
    };
    prob.f.push_back(f);

    BivariateMap cons;
    cons.dim_out = 1;
    cons.value = [blk](const VectorXd& x, const VectorXd& y) {
      return vec1(cons_value(blk, y[0], x[0], x[1]));
    };
    cons.grad_x = [blk](const VectorXd& x, const VectorXd& y) {
      MatrixXd g(2, 1);
      g << -2.0 * blk.c2 * x[0] / (y[0] + 1.0), blk.c1;
      return g;
    };
    cons.grad_y = [blk](const VectorXd& x, const VectorXd& y) {
      MatrixXd g(1, 1);
      g << blk.c2 * x[0] * x[0] / ((y[0] + 1.0) * (y[0] + 1.0));
      return g;
    };
    if (equality) {
      prob.h_coupled.push_back(cons);
      prob.g_coupled.push_back(empty_bivariate_map());
    } else {
      prob.g_coupled.push_back(cons);
      prob.h_coupled.push_back(empty_bivariate_map());
    }
    prob.g_block.push_back(empty_vector_oracle(2));

    BoxSet xs;
    xs.lower = VectorXd(2);
    xs.upper = VectorXd(2);
    xs.lower << -1.0, -std::numeric_limits<double>::infinity();
    xs.upper << 1.0, std::numeric_limits<double>::infinity();
    prob.x_sets.push_back(xs);
  }

  const double a = p.a_global, y0 = p.y0;
  prob.f0.dim = 1;
  prob.f0.value = [a, y0](const VectorXd& y) { return a * (y[0] - y0) * (y[0] - y0); };
  prob.f0.grad = [a, y0](const VectorXd& y) { return vec1(2.0 * a * (y[0] - y0)); };
  prob.g0 = empty_vector_oracle(1);

  const std::vector<CouplingVarBlock> blocks = p.cv_blocks;
  const Variant v = p.variant;
  prob.block_solver = [blocks, v, quintic](int i, const VectorXd& y) -> VectorXd {
    const CouplingVarBlock& blk = blocks[static_cast<size_t>(i)];
    return (v == Variant::kEx1) ? ex1_pd_block(blk, y[0]) : ex23_pd_block(blk, y[0], quintic);
  };
  prob.master_solver = [a, y0](const VectorXd& y_k, const VectorXd& grad,
                               double tau) -> VectorXd {
    double denom = 2.0 * a + tau;
    if (denom <= 0.0) throw DegenerateParams("master problem is not strongly convex");
    return vec1(std::clamp((2.0 * a * y0 + tau * y_k[0] - grad[0]) / denom, 0.0, 1.0));
  };
  return prob;
}

ProblemSPD make_spd_problem(const ExampleParams& p) {
  if (p.variant != Variant::kEx2 && p.variant != Variant::kEx3)
    throw DegenerateParams("make_spd_problem applies to examples 2 and 3 only");
  ProblemPD pd = make_pd_problem(p);
  ProblemSPD prob;
  prob.block_count = pd.block_count;
  prob.y_dim = pd.y_dim;
  prob.block_dims = pd.block_dims;
  prob.f = pd.f;
  prob.g_coupled = pd.g_coupled;
  prob.a_x.assign(static_cast<size_t>(pd.block_count), MatrixXd::Zero(0, 2));
  prob.a_y.assign(static_cast<size_t>(pd.block_count), MatrixXd::Zero(0, 1));
  prob.b_eq.assign(static_cast<size_t>(pd.block_count), VectorXd::Zero(0));
  prob.g_block = pd.g_block;
  prob.x_sets = pd.x_sets;
  prob.f0 = pd.f0;
  prob.g0 = pd.g0;
  prob.y_set = pd.y_set;
  return prob;
}

ProblemDD make_dd_problem(const ExampleParams& p) {
  if (coupling_variable_family(p.variant))
    throw DegenerateParams("make_dd_problem needs a coupling-constraint example");
  const bool quintic = quintic_powers(p.variant);
  const bool equality = p.variant == Variant::kEx4;
  const double b_over_i = p.b_global / p.block_count;

  ProblemDD prob;
  prob.block_count = p.block_count;
  prob.block_dims.assign(static_cast<size_t>(p.block_count), 1);
  prob.coupled_ineq_dim = equality ? 0 : 1;
  prob.coupled_eq_dim = equality ? 1 : 0;

  for (int i = 0; i < p.block_count; ++i) {
    const CouplingConsBlock blk = p.cc_blocks[static_cast<size_t>(i)];
    FunctionOracle f;
    f.dim = 1;
    f.value = [blk, quintic](const VectorXd& x) { return cc_f_value(blk, quintic, x[0]); };
    f.grad = [blk, quintic](const VectorXd& x) { return vec1(cc_f_grad(blk, quintic, x[0])); };
    prob.f.push_back(f);

    VectorOracle cons;
    cons.dim_in = 1;
    cons.dim_out = 1;
    cons.value = [blk, b_over_i](const VectorXd& x) { return vec1(cc_g_value(blk, x[0], b_over_i)); };
    cons.grad = [blk](const VectorXd& x) {
      MatrixXd g(1, 1);
      g << cc_g_grad(blk, x[0]);
      return g;
    };
    if (equality) {
      prob.h_coupled.push_back(cons);
      prob.g_coupled.push_back(empty_vector_oracle(1));
    } else {
      prob.g_coupled.push_back(cons);
      prob.h_coupled.push_back(empty_vector_oracle(1));
    }
    prob.g_block.push_back(empty_vector_oracle(1));
    prob.x_sets.push_back(BoxSet::interval(-0.05, 0.05));
  }

  const std::vector<CouplingConsBlock> blocks = p.cc_blocks;
  const Variant v = p.variant;
  prob.block_solver = [blocks, v](int i, const VectorXd& mu, const VectorXd& lambda,
                                  const VectorXd* warm) -> VectorXd {
    double m = mu.size() ? mu[0] : 0.0;
    double l = lambda.size() ? lambda[0] : 0.0;
    double w = warm && warm->size() ? (*warm)[0] : 0.0;
    return vec1(ex456_dd_block(blocks[static_cast<size_t>(i)], v, m, l, warm ? &w : nullptr));
  };
  return prob;
}

ProblemSDD make_sdd_problem(const ExampleParams& p) {
  if (p.variant != Variant::kEx5 && p.variant != Variant::kEx6)
    throw DegenerateParams("make_sdd_problem applies to examples 5 and 6 only");
  ProblemDD dd = make_dd_problem(p);
  ProblemSDD prob;
  prob.block_count = dd.block_count;
  prob.block_dims = dd.block_dims;
  prob.coupled_ineq_dim = dd.coupled_ineq_dim;
  prob.coupled_eq_dim = 0;
  prob.f = dd.f;
  prob.g_coupled = dd.g_coupled;
  prob.a.assign(static_cast<size_t>(dd.block_count), MatrixXd::Zero(0, 1));
  prob.b = VectorXd::Zero(0);
  prob.g_block = dd.g_block;
  prob.x_sets = dd.x_sets;
  return prob;
}

SpdApproxBuilder spd_builder(const ExampleParams& p, const SurrogateParams& sp) {
  const bool quintic = quintic_powers(p.variant);
  const std::vector<CouplingVarBlock> blocks = p.cv_blocks;
  const double a = p.a_global, y0 = p.y0;
  return [blocks, quintic, a, y0, sp](const ProblemSPD& prob, const BlockVector& x,
                                      const VectorXd& y) -> SPDApprox {
    SPDApprox ap;
    ap.anchor_x = x;
    ap.anchor_y = y;
    ap.y_set = prob.y_set;
    ap.a_y = prob.a_y;
    const double yk = y[0];
    for (int i = 0; i < prob.block_count; ++i) {
      const CouplingVarBlock blk = blocks[static_cast<size_t>(i)];
      const VectorXd xk = x.blocks[static_cast<size_t>(i)];
      const double x1k = xk[0];
      const double d = fx1_dx1(blk, quintic, yk, x1k);
      const double fx_at = fx1_value(blk, quintic, yk, x1k);
      const double tau_x = sp.tau_x;
      const double dfy = fx1_dy(blk, quintic, yk, x1k);
      const double tau_y = sp.tau_y;

      SpdBlockApprox b;
      b.f_x.dim = 2;
      b.f_x.value = [blk, fx_at, d, tau_x, x1k](const VectorXd& xx) {
        double dx = xx[0] - x1k;
        return fx_at + d * dx + 0.5 * tau_x * dx * dx + blk.b1 * xx[1] +
               blk.b2 * xx[1] * xx[1];
      };
      b.f_x.grad = [blk, d, tau_x, x1k](const VectorXd& xx) {
        VectorXd g(2);
        g << d + tau_x * (xx[0] - x1k), blk.b1 + 2.0 * blk.b2 * xx[1];
        return g;
      };
      b.f_y.dim = 1;
      b.f_y.value = [tau_y, dfy, yk](const VectorXd& yy) {
        double dy = yy[0] - yk;
        return 0.5 * tau_y * dy * dy + dfy * dy;
      };
      b.f_y.grad = [tau_y, dfy, yk](const VectorXd& yy) {
        return vec1(tau_y * (yy[0] - yk) + dfy);
      };

      const double phik = -blk.c2 * x1k * x1k / (yk + 1.0);
      const double gx = -2.0 * blk.c2 * x1k / (yk + 1.0);
      const double gy = blk.c2 * x1k * x1k / ((yk + 1.0) * (yk + 1.0));
      b.g_coupled_x.dim_in = 2;
      b.g_coupled_x.dim_out = 1;
      b.g_coupled_x.value = [blk, phik, gx, gy, x1k, yk](const VectorXd& xx) {
        return vec1(blk.c1 * xx[1] + blk.c0 + phik + gx * (xx[0] - x1k) - gy * yk);
      };
      b.g_coupled_x.grad = [blk, gx](const VectorXd&) {
        MatrixXd g(2, 1);
        g << gx, blk.c1;
        return g;
      };
      b.c = MatrixXd::Constant(1, 1, gy);
      b.g_block = empty_vector_oracle(2);

      b.solver = [blk, xk, yk, tau_x, quintic](const VectorXd& yy) {
        auto [pt, mu] = ex23_spd_block(blk, xk, yk, tau_x, yy[0], quintic);
        MultiplierSet m;
        m.ineq = vec1(mu);
        m.eq = VectorXd::Zero(0);
        m.bound_lower = VectorXd::Zero(2);
        m.bound_upper = VectorXd::Zero(2);
        return std::make_pair(pt, m);
      };
      ap.blocks.push_back(std::move(b));
    }
    ap.f0.dim = 1;
    ap.f0.value = [a, y0](const VectorXd& yy) { return a * (yy[0] - y0) * (yy[0] - y0); };
    ap.f0.grad = [a, y0](const VectorXd& yy) { return vec1(2.0 * a * (yy[0] - y0)); };
    ap.g0 = empty_vector_oracle(1);
    BoxSet ys = prob.y_set;
    ap.project_master = [ys](const VectorXd& yy) { return ys.project(yy); };
    return ap;
  };
}

SddApproxBuilder sdd_builder(const ExampleParams& p, const SurrogateParams& sp) {
  const bool quintic = quintic_powers(p.variant);
  const std::vector<CouplingConsBlock> blocks = p.cc_blocks;
  const double b_over_i = p.b_global / p.block_count;
  const Variant v = p.variant;
  return [blocks, quintic, b_over_i, v, sp](const ProblemSDD& prob,
                                            const BlockVector& x) -> SDDApprox {
    SDDApprox ap;
    ap.anchor = x;
    ap.a = prob.a;
    ap.b = prob.b;
    ap.coupled_ineq_dim = prob.coupled_ineq_dim;
    const double tau = sp.tau;
    const double cl = sp.curvature_l;
    for (int i = 0; i < prob.block_count; ++i) {
      const CouplingConsBlock blk = blocks[static_cast<size_t>(i)];
      const double xk = x.blocks[static_cast<size_t>(i)][0];

      SddBlockApprox b;
      b.f.dim = 1;
      if (quintic) {
        const double df = cc_f_grad(blk, true, xk);
        b.f.value = [df, tau, xk](const VectorXd& xx) {
          double dx = xx[0] - xk;
          return df * dx + 0.5 * tau * dx * dx;
        };
        b.f.grad = [df, tau, xk](const VectorXd& xx) { return vec1(df + tau * (xx[0] - xk)); };
      } else {
        b.f.value = [blk, tau, xk](const VectorXd& xx) {
          double xv = xx[0], dx = xv - xk;
          double v = 3.0 * blk.a[2] * xk * xk * dx + blk.a[0] * xv;
          if (blk.a[1] > 0.0)
            v += blk.a[1] * xv * xv;
          else
            v += 0.5 * tau * dx * dx + 2.0 * blk.a[1] * xk * dx;
          return v;
        };
        b.f.grad = [blk, tau, xk](const VectorXd& xx) {
          double xv = xx[0], dx = xv - xk;
          double g = 3.0 * blk.a[2] * xk * xk + blk.a[0];
          if (blk.a[1] > 0.0)
            g += 2.0 * blk.a[1] * xv;
          else
            g += tau * dx + 2.0 * blk.a[1] * xk;
          return vec1(g);
        };
      }

      b.g_coupled.dim_in = 1;
      b.g_coupled.dim_out = 1;
      b.g_coupled.value = [blk, cl, xk, b_over_i](const VectorXd& xx) {
        double xv = xx[0], dx = xv - xk;
        double v = 3.0 * blk.b[2] * xk * xk * dx + blk.b[2] * xk * xk * xk +
                   0.5 * cl * dx * dx + blk.b[0] * xv + b_over_i;
        if (blk.b[1] > 0.0)
          v += blk.b[1] * xv * xv;
        else
          v += 2.0 * blk.b[1] * xk * dx + blk.b[1] * xk * xk;
        return vec1(v);
      };
      b.g_coupled.grad = [blk, cl, xk](const VectorXd& xx) {
        double xv = xx[0];
        double g = 3.0 * blk.b[2] * xk * xk + cl * (xv - xk) + blk.b[0];
        g += (blk.b[1] > 0.0) ? 2.0 * blk.b[1] * xv : 2.0 * blk.b[1] * xk;
        MatrixXd m(1, 1);
        m << g;
        return m;
      };
      b.g_block = empty_vector_oracle(1);
      b.solver = [blk, v, xk, tau, cl](const VectorXd& mu, const VectorXd& lambda) {
        (void)lambda;  // no coupled equalities in these examples
        return vec1(ex56_sdd_block(blk, v, xk, tau, cl, mu.size() ? mu[0] : 0.0));
      };
      ap.blocks.push_back(std::move(b));
    }
    return ap;
  };
}

// ---------------------------------------------------------------------------
// Convergence criterion and reporting.
// ---------------------------------------------------------------------------

ConvergenceCriterion criterion_for(Variant v) {
  ConvergenceCriterion c;
  c.coupling_constraint_family = !coupling_variable_family(v);
  c.objective_offset = reporting_offset(v);
  return c;
}

bool check_convergence(const Trajectory& traj, const ConvergenceCriterion& c) {
  if (static_cast<int>(traj.entries.size()) <= c.window_hi)
    throw TrajectoryTooShort("check_convergence: trajectory shorter than the window");
  for (int k = c.window_lo; k <= c.window_hi; ++k) {
    const TrajectoryEntry& e = traj.entries[static_cast<size_t>(k)];
    if (!std::isfinite(e.objective)) return false;
    if (c.coupling_constraint_family) {
      // The benchmark criterion bounds only the positive part of the coupling
      // inequality; equality residuals shrink toward the limit point but are
      // not part of the stopping rule.
      if (!(e.violations.ineq_coupling < c.coupling_tol)) return false;
    } else {
      if (!(e.violations.mean_ineq < c.mean_ineq_tol)) return false;
      if (!(e.violations.max_ineq < c.max_ineq_tol)) return false;
    }
  }
  double f_lo = traj.entries[static_cast<size_t>(c.window_lo)].objective + c.objective_offset;
  double f_hi = traj.entries[static_cast<size_t>(c.window_hi)].objective + c.objective_offset;
  return std::fabs(f_hi - f_lo) <= c.rel_objective_tol * std::fabs(f_lo);
}

double reporting_offset(Variant v) {
  switch (v) {
    case Variant::kEx4:
      return 41.0;
    case Variant::kEx5:
      return 40.0;
    case Variant::kEx6:
      return 0.06;
    default:
      return 0.0;
  }
}

BestObjective best_objective(const Trajectory& traj, Variant v) {
  const bool cc = !coupling_variable_family(v);
  BestObjective best;
  for (size_t k = 1; k < traj.entries.size(); ++k) {
    const TrajectoryEntry& e = traj.entries[k];
    if (!std::isfinite(e.objective)) continue;
    bool ok = cc ? (e.violations.ineq_coupling < 1e-2)
                 : (e.violations.mean_ineq < 1e-6 && e.violations.max_eq < 1e-5);
    if (!ok) continue;
    if (!best.found || e.objective < best.value) {
      best.found = true;
      best.value = e.objective;
      best.time_s = e.time_s;
      best.iteration = static_cast<int>(k);
    }
  }
  if (best.found) best.value += reporting_offset(v);
  return best;
}

}  // namespace decomp::examples
