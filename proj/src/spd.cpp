#include "decomp/spd.hpp"

#include <chrono>
#include <cmath>

#include "decomp/parallel.hpp"
#include "decomp/pd.hpp"

namespace decomp {

double SPDApprox::objective_value(const BlockVector& x, const VectorXd& y) const {
  double v = f0.value ? f0.value(y) : 0.0;
  for (size_t i = 0; i < blocks.size(); ++i)
    v += blocks[i].f_x.value(x.blocks[i]) + blocks[i].f_y.value(y);
  return v;
}

namespace {

// Generic exact solver for a builder-produced block: strongly convex
// quadratic objective (Taylor form), affine inequality rows, optional affine
// equalities, box. Inner x-minimization is closed form, the small dual is
// handled by projected gradient ascent.
std::pair<VectorXd, MultiplierSet> generic_block_solve(double tau,
                                                       const VectorXd& prox_center,
                                                       const VectorXd& lin_base,
                                                       const MatrixXd& ineq_rows,
                                                       const VectorXd& ineq_shift,
                                                       const MatrixXd& eq_rows,
                                                       const VectorXd& eq_shift,
                                                       const BoxSet& box) {
  const int r = static_cast<int>(ineq_rows.rows());
  const int m = static_cast<int>(eq_rows.rows());
  auto x_of = [&](const VectorXd& mu, const VectorXd& lam) -> VectorXd {
    VectorXd lin = lin_base;
    if (r) lin += ineq_rows.transpose() * mu;
    if (m) lin += eq_rows.transpose() * lam;
    return box.project(prox_center - lin / tau);
  };
  VectorXd mu = VectorXd::Zero(r), lam = VectorXd::Zero(m);
  double step = tau / std::max(1.0, ineq_rows.squaredNorm() + eq_rows.squaredNorm());
  VectorXd x = x_of(mu, lam);
  for (int it = 0; it < 20000; ++it) {
    VectorXd gi = r ? VectorXd(ineq_rows * x + ineq_shift) : VectorXd(0);
    VectorXd ge = m ? VectorXd(eq_rows * x + eq_shift) : VectorXd(0);
    double viol = 0.0;
    for (int j = 0; j < r; ++j) viol = std::max(viol, std::max(0.0, gi[j]));
    if (m) viol = std::max(viol, ge.cwiseAbs().maxCoeff());
    if (viol < 1e-12 && it > 0) break;
    if (r) mu = (mu + step * gi).cwiseMax(0.0);
    if (m) lam += step * ge;
    x = x_of(mu, lam);
  }
  MultiplierSet out;
  out.ineq = mu;
  out.eq = lam;
  out.bound_lower = VectorXd::Zero(x.size());
  out.bound_upper = VectorXd::Zero(x.size());
  return {x, out};
}

}  // namespace

SPDApprox build_spd_approx(const ProblemSPD& p, const BlockVector& x, const VectorXd& y,
                           const SurrogateParams& sp) {
  if (sp.tau_x <= 0.0)
    throw SpecViolation("build_spd_approx: tau_x must be positive for the generic builder");
  SPDApprox ap;
  ap.anchor_x = x;
  ap.anchor_y = y;
  ap.a_y = p.a_y;
  ap.y_set = p.y_set;

  for (int i = 0; i < p.block_count; ++i) {
    const auto& f = p.f[static_cast<size_t>(i)];
    const auto& gc = p.g_coupled[static_cast<size_t>(i)];
    const VectorXd xi = x.blocks[static_cast<size_t>(i)];
    const VectorXd gx = f.grad_x(xi, y);
    const VectorXd gy = f.grad_y(xi, y);
    const double fval = f.value(xi, y);
    const double tau_x = sp.tau_x, tau_y = sp.tau_y;

    SpdBlockApprox b;
    b.f_x.dim = static_cast<int>(xi.size());
    b.f_x.value = [fval, gx, xi, tau_x](const VectorXd& xx) {
      VectorXd d = xx - xi;
      return fval + gx.dot(d) + 0.5 * tau_x * d.squaredNorm();
    };
    b.f_x.grad = [gx, xi, tau_x](const VectorXd& xx) -> VectorXd {
      return gx + tau_x * (xx - xi);
    };
    b.f_y.dim = static_cast<int>(y.size());
    const VectorXd yk = y;
    b.f_y.value = [gy, yk, tau_y](const VectorXd& yy) {
      VectorXd d = yy - yk;
      return gy.dot(d) + 0.5 * tau_y * d.squaredNorm();
    };
    b.f_y.grad = [gy, yk, tau_y](const VectorXd& yy) -> VectorXd {
      return gy + tau_y * (yy - yk);
    };

    // Coupled inequality: full linearization at the anchor, split into an
    // x-part and the linear-in-y matrix C.
    const int ri = gc.dim_out;
    MatrixXd rows(ri, xi.size());
    MatrixXd c_mat(ri, y.size());
    VectorXd shift(ri);
    if (ri) {
      VectorXd g0v = gc.value(xi, y);
      rows = gc.grad_x(xi, y).transpose();
      c_mat = gc.grad_y(xi, y).transpose();
      shift = g0v - rows * xi - c_mat * y;
    }
    b.c = c_mat;
    b.g_coupled_x.dim_in = static_cast<int>(xi.size());
    b.g_coupled_x.dim_out = ri;
    b.g_coupled_x.value = [rows, shift](const VectorXd& xx) -> VectorXd {
      return rows.rows() ? VectorXd(rows * xx + shift) : VectorXd(0);
    };
    b.g_coupled_x.grad = [rows](const VectorXd& xx) -> MatrixXd {
      return rows.rows() ? MatrixXd(rows.transpose()) : MatrixXd(xx.size(), 0);
    };
    b.g_block = p.g_block[static_cast<size_t>(i)];
    if (!b.g_block.empty())
      throw SpecViolation("generic spd builder does not linearize block-local inequalities");

    const MatrixXd ax = p.a_x[static_cast<size_t>(i)];
    const MatrixXd ay = p.a_y[static_cast<size_t>(i)];
    const VectorXd be = p.b_eq[static_cast<size_t>(i)];
    const BoxSet box = p.x_sets[static_cast<size_t>(i)];
    b.solver = [gx, xi, tau_x, rows, shift, c_mat, ax, ay, be,
                box](const VectorXd& yy) {
      VectorXd ineq_shift = shift.size() ? VectorXd(shift + c_mat * yy) : VectorXd(0);
      VectorXd eq_shift = be.size() ? VectorXd(ay * yy + be) : VectorXd(0);
      return generic_block_solve(tau_x, xi, gx, rows, ineq_shift, ax, eq_shift, box);
    };
    ap.blocks.push_back(std::move(b));
  }

  // F0: Taylor model of f0 at y.
  const VectorXd g0y = p.f0.grad ? p.f0.grad(y) : VectorXd(VectorXd::Zero(y.size()));
  const double f0v = p.f0.value ? p.f0.value(y) : 0.0;
  const VectorXd yk = y;
  const double tau_y0 = std::max(sp.tau_y, 1e-8);
  ap.f0.dim = static_cast<int>(y.size());
  ap.f0.value = [f0v, g0y, yk, tau_y0](const VectorXd& yy) {
    VectorXd d = yy - yk;
    return f0v + g0y.dot(d) + 0.5 * tau_y0 * d.squaredNorm();
  };
  ap.f0.grad = [g0y, yk, tau_y0](const VectorXd& yy) -> VectorXd {
    return g0y + tau_y0 * (yy - yk);
  };
  ap.g0 = p.g0;

  BoxSet ys = p.y_set;
  if (p.g0.dim_out == 0) {
    ap.project_master = [ys](const VectorXd& yy) { return ys.project(yy); };
  } else {
    // Best effort: alternate between the box and the halfspaces from
    // linearizing each G0 component at the current point.
    VectorOracle g0o = p.g0;
    ap.project_master = [ys, g0o](const VectorXd& yy) {
      VectorXd v = ys.project(yy);
      for (int sweep = 0; sweep < 32; ++sweep) {
        VectorXd g = g0o.value(v);
        double worst = g.size() ? g.maxCoeff() : 0.0;
        if (worst <= 1e-10) break;
        for (int j = 0; j < g.size(); ++j) {
          if (g[j] <= 0) continue;
          VectorXd n = g0o.grad(v).col(j);
          double nn = n.squaredNorm();
          if (nn > 0) v -= (g[j] / nn) * n;
        }
        v = ys.project(v);
      }
      return v;
    };
  }
  return ap;
}

std::pair<VectorXd, MultiplierSet> solve_subproblem_spd(const SPDApprox& a, int i,
                                                        const VectorXd& y) {
  return a.blocks[static_cast<size_t>(i)].solver(y);
}

VectorXd master_subgradient(const SPDApprox& a, const VectorXd& y,
                            const std::vector<MultiplierSet>& mults) {
  VectorXd g = a.f0.grad ? a.f0.grad(y) : VectorXd(VectorXd::Zero(y.size()));
  for (size_t i = 0; i < a.blocks.size(); ++i) {
    const auto& b = a.blocks[i];
    g += b.f_y.grad(y);
    const int ri = b.g_coupled_x.dim_out;
    if (ri) g += b.c.transpose() * mults[i].ineq.head(ri);
    if (!a.a_y.empty() && a.a_y[i].rows() > 0) g += a.a_y[i].transpose() * mults[i].eq;
  }
  return g;
}

SpdInnerResult inner_loop(const SPDApprox& a, const VectorXd& y_init,
                          const InnerStepSchedule& sched, double sigma, int T, int threads) {
  const int nblocks = static_cast<int>(a.blocks.size());
  SpdInnerResult res;
  res.x.blocks.resize(static_cast<size_t>(nblocks));
  res.mult.resize(static_cast<size_t>(nblocks));
  VectorXd y = a.project_master(y_init);

  double prev_f = 0.0;
  double gamma = sched.gamma0;
  for (int pass = 0; pass < std::max(1, T); ++pass) {
    parallel_for(nblocks, threads, [&](int i) {
      auto [x, m] = a.blocks[static_cast<size_t>(i)].solver(y);
      res.x.blocks[static_cast<size_t>(i)] = x;
      res.mult[static_cast<size_t>(i)] = m;
    });
    res.y = y;
    res.iterations = pass + 1;
    double f = a.objective_value(res.x, y);
    if (pass >= 1) {
      res.last_rel_change = std::fabs(f - prev_f) / std::max(std::fabs(prev_f), 1e-300);
      if (std::fabs(f - prev_f) <= sigma * std::fabs(prev_f)) break;
    }
    prev_f = f;
    if (pass + 1 >= std::max(1, T)) break;
    VectorXd grad = master_subgradient(a, y, res.mult);
    y = a.project_master(y - gamma * grad);
    gamma = gamma * (1.0 - sched.beta_in * gamma);
  }
  return res;
}

SPDState spd_init(const ProblemSPD& p, const BlockVector& x0, const VectorXd& y0) {
  if (x0.block_count() != p.block_count || y0.size() != p.y_dim)
    throw DimensionMismatch("spd_init: dimensions");
  SPDState s;
  s.x = x0;
  s.y = p.y_set.project(y0);
  return s;
}

void spd_iterate(SPDState& s, const ProblemSPD& p, const SPDConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const double base_time = s.traj.entries.empty() ? 0.0 : s.traj.entries.back().time_s;

  SPDApprox approx = cfg.build ? cfg.build(p, s.x, s.y)
                               : build_spd_approx(p, s.x, s.y, cfg.surrogate);
  SpdInnerResult inner = inner_loop(approx, s.y, cfg.inner, cfg.sigma, cfg.T, cfg.threads);

  const double gamma = outer_step(cfg.outer, s.k);
  BlockVector x_next = smooth_update(s.x, inner.x, gamma);
  VectorXd y_next = smooth_update(s.y, inner.y, gamma);

  TrajectoryEntry entry;
  entry.objective = objective(p, s.x, s.y);
  entry.violations = violation_metrics(p, s.x, s.y);
  entry.step = gamma;
  double disp2 = (y_next - s.y).squaredNorm();
  for (int i = 0; i < p.block_count; ++i)
    disp2 += (x_next.blocks[static_cast<size_t>(i)] - s.x.blocks[static_cast<size_t>(i)])
                 .squaredNorm();
  entry.displacement = std::sqrt(disp2);
  entry.time_s =
      base_time + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.traj.entries.push_back(entry);
  s.traj.inner_gap = inner.last_rel_change;

  s.x = x_next;
  s.y = y_next;
  ++s.k;
}

Trajectory run_spd(const ProblemSPD& p, const BlockVector& x0, const VectorXd& y0,
                   const SPDConfig& cfg, int max_outer) {
  SPDState s = spd_init(p, x0, y0);
  for (int k = 0; k < max_outer; ++k) spd_iterate(s, p, cfg);

  TrajectoryEntry entry;
  entry.objective = objective(p, s.x, s.y);
  entry.violations = violation_metrics(p, s.x, s.y);
  entry.time_s = s.traj.entries.empty() ? 0.0 : s.traj.entries.back().time_s;
  s.traj.entries.push_back(entry);

  // Block-wise multiplier fits keep the final stationarity check cheap at
  // scale; the y-stationarity then follows the envelope assembly.
  ProblemPD pd = p.as_pd();
  std::vector<MultiplierSet> bm(static_cast<size_t>(p.block_count));
  for (int i = 0; i < p.block_count; ++i)
    bm[static_cast<size_t>(i)] = fit_multipliers(make_pd_subproblem(pd, i, s.y),
                                                 s.x.blocks[static_cast<size_t>(i)], 1e-5);
  Nlp full = full_nlp(pd);
  VectorXd v(full.dim);
  v << s.x.flatten(), s.y;
  MultiplierSet m = assemble_pd_multipliers(pd, bm, VectorXd::Zero(pd.g0.dim_out));
  s.traj.final_kkt_residual = kkt_residual(full, v, m).total();
  return s.traj;
}

}  // namespace decomp
