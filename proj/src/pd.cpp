#include "decomp/pd.hpp"

#include <chrono>
#include <cmath>

#include "decomp/parallel.hpp"

namespace decomp {

namespace {

// Stack of coupled inequalities then block-local ones, matching the
// multiplier slicing convention (coupled rows first).
Nlp subproblem_view(const ProblemPD& p, int i, const VectorXd& y) {
  const auto& f = p.f[static_cast<size_t>(i)];
  const auto& gc = p.g_coupled[static_cast<size_t>(i)];
  const auto& hc = p.h_coupled[static_cast<size_t>(i)];
  const auto& gb = p.g_block[static_cast<size_t>(i)];
  const int ni = p.block_dims[static_cast<size_t>(i)];

  Nlp nlp;
  nlp.dim = ni;
  nlp.objective = [f, y](const VectorXd& x) { return f.value(x, y); };
  nlp.objective_grad = [f, y](const VectorXd& x) { return f.grad_x(x, y); };
  nlp.coupled_ineq = gc.dim_out;
  nlp.coupled_eq = hc.dim_out;

  nlp.ineq.dim_in = ni;
  nlp.ineq.dim_out = gc.dim_out + gb.dim_out;
  nlp.ineq.value = [gc, gb, y](const VectorXd& x) {
    VectorXd g(gc.dim_out + gb.dim_out);
    if (gc.dim_out) g.head(gc.dim_out) = gc.value(x, y);
    if (gb.dim_out) g.tail(gb.dim_out) = gb.value(x);
    return g;
  };
  nlp.ineq.grad = [gc, gb, y, ni](const VectorXd& x) {
    MatrixXd g(ni, gc.dim_out + gb.dim_out);
    if (gc.dim_out) g.leftCols(gc.dim_out) = gc.grad_x(x, y);
    if (gb.dim_out) g.rightCols(gb.dim_out) = gb.grad(x);
    return g;
  };

  nlp.eq.dim_in = ni;
  nlp.eq.dim_out = hc.dim_out;
  nlp.eq.value = [hc, y](const VectorXd& x) { return hc.value(x, y); };
  nlp.eq.grad = [hc, y](const VectorXd& x) { return hc.grad_x(x, y); };

  nlp.box = p.x_sets[static_cast<size_t>(i)];
  return nlp;
}

}  // namespace

Nlp make_pd_subproblem(const ProblemPD& p, int i, const VectorXd& y) {
  return subproblem_view(p, i, y);
}

std::pair<VectorXd, MultiplierSet> solve_subproblem_pd(const ProblemPD& p, int i,
                                                       const VectorXd& y) {
  if (!p.block_solver) throw std::runtime_error("ProblemPD has no block solver attached");
  VectorXd x = p.block_solver(i, y);
  Nlp nlp = subproblem_view(p, i, y);
  return {x, recover_multipliers(nlp, x)};
}

VectorXd master_gradient_block(const ProblemPD& p, int i, const VectorXd& y, const VectorXd& xi,
                               const MultiplierSet& m) {
  const auto& f = p.f[static_cast<size_t>(i)];
  const auto& gc = p.g_coupled[static_cast<size_t>(i)];
  const auto& hc = p.h_coupled[static_cast<size_t>(i)];
  VectorXd g = f.grad_y(xi, y);
  if (gc.dim_out) g += gc.grad_y(xi, y) * m.ineq.head(gc.dim_out);
  if (hc.dim_out) g += hc.grad_y(xi, y) * m.eq;
  return g;
}

VectorXd solve_approx_master(const ProblemPD& p, const VectorXd& y_k, const VectorXd& grad,
                             double tau, double tol) {
  if (p.master_solver) return p.master_solver(y_k, grad, tau);

  // Projected gradient on F0(y) + tau/2 ||y-y_k||^2 + grad^T (y-y_k) over Y.
  // Curvature estimated from gradient differences around y_k.
  auto model_grad = [&](const VectorXd& y) -> VectorXd {
    VectorXd g = grad + tau * (y - y_k);
    if (p.f0.grad) g += p.f0.grad(y);
    return g;
  };
  double l_est = tau;
  if (p.f0.grad) {
    VectorXd probe = y_k;
    for (int j = 0; j < y_k.size(); ++j) {
      double h = 1e-4 * std::max(1.0, std::fabs(y_k[j]));
      probe[j] = y_k[j] + h;
      l_est = std::max(l_est, tau + (p.f0.grad(probe) - p.f0.grad(y_k)).norm() / h);
      probe[j] = y_k[j];
    }
  }
  if (l_est <= 0.0) throw ApproxMasterInfeasible("approximate master has no curvature");
  const double step = 1.0 / l_est;
  VectorXd y = p.y_set.project(y_k);
  for (int it = 0; it < 200000; ++it) {
    VectorXd next = p.y_set.project(y - step * model_grad(y));
    if ((next - y).cwiseAbs().maxCoeff() <= tol) return next;
    y = next;
  }
  return y;
}

VectorXd infeasible_recovery(const VectorXd& y_k, const VectorXd& y_prev,
                             const std::function<bool(const VectorXd&)>& feasible) {
  double delta = 1.0;
  for (int halvings = 0; halvings <= 20; ++halvings) {
    VectorXd candidate = y_prev + delta * (y_k - y_prev);
    if (feasible(candidate)) return candidate;
    delta *= 0.5;
  }
  throw RecoveryFailed("infeasible_recovery: no feasible step after 20 halvings");
}

PDState pd_init(const ProblemPD& p, const VectorXd& y0) {
  PDState s;
  s.y = p.y_set.project(y0);
  s.mult.resize(static_cast<size_t>(p.block_count));
  s.x.blocks.resize(static_cast<size_t>(p.block_count));
  return s;
}

namespace {

// Solves all blocks at y; returns false when some subproblem is infeasible.
bool evaluate_blocks(PDState& s, const ProblemPD& p, int threads) {
  bool ok = true;
  try {
    parallel_for(p.block_count, threads, [&](int i) {
      auto [x, m] = solve_subproblem_pd(p, i, s.y);
      s.x.blocks[static_cast<size_t>(i)] = x;
      s.mult[static_cast<size_t>(i)] = m;
    });
  } catch (const SubproblemInfeasible&) {
    ok = false;
  }
  return ok;
}

TrajectoryEntry entry_for(const ProblemPD& p, const PDState& s, bool feasible) {
  TrajectoryEntry e;
  if (feasible) {
    e.objective = objective(p, s.x, s.y);
    e.violations = violation_metrics(p, s.x, s.y);
  } else {
    e.violations.coupling = std::numeric_limits<double>::infinity();
  }
  return e;
}

}  // namespace

void pd_iterate(PDState& s, const ProblemPD& p, const PDConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const double base_time = s.traj.entries.empty() ? 0.0 : s.traj.entries.back().time_s;

  const bool feasible = evaluate_blocks(s, p, cfg.threads);
  TrajectoryEntry entry = entry_for(p, s, feasible);

  VectorXd y_next;
  if (feasible) {
    VectorXd grad = VectorXd::Zero(p.y_dim);
    for (int i = 0; i < p.block_count; ++i)
      grad += master_gradient_block(p, i, s.y, s.x.blocks[static_cast<size_t>(i)],
                                    s.mult[static_cast<size_t>(i)]);
    s.master_grad = grad;
    VectorXd y_star = solve_approx_master(p, s.y, grad, cfg.tau, cfg.master_tol);
    y_next = smooth_update(s.y, y_star, outer_step(cfg.step, s.k));
  } else {
    if (!s.has_prev)
      throw RecoveryFailed("subproblem infeasible at the initial point, nothing to fall back to");
    auto probe = [&](const VectorXd& y) {
      try {
        for (int i = 0; i < p.block_count; ++i) (void)p.block_solver(i, y);
        return true;
      } catch (const SubproblemInfeasible&) {
        return false;
      }
    };
    y_next = infeasible_recovery(s.y, s.y_prev, probe);
  }

  entry.step = outer_step(cfg.step, s.k);
  entry.displacement = (y_next - s.y).norm();
  entry.time_s = base_time + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.traj.entries.push_back(entry);

  s.y_prev = s.y;
  s.has_prev = true;
  s.y = y_next;
  ++s.k;
}

Trajectory run_pd(const ProblemPD& p, const VectorXd& y0, const PDConfig& cfg, int max_outer) {
  PDState s = pd_init(p, y0);
  for (int k = 0; k < max_outer; ++k) pd_iterate(s, p, cfg);

  // Final evaluation pass at y(K), plus the assembled stationarity residual.
  const auto t0 = std::chrono::steady_clock::now();
  const double base_time = s.traj.entries.empty() ? 0.0 : s.traj.entries.back().time_s;
  const bool feasible = evaluate_blocks(s, p, cfg.threads);
  TrajectoryEntry entry = entry_for(p, s, feasible);
  entry.time_s =
      base_time + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.traj.entries.push_back(entry);

  if (feasible) {
    Nlp full = full_nlp(p);
    MultiplierSet m = assemble_pd_multipliers(p, s.mult, VectorXd::Zero(p.g0.dim_out));
    VectorXd v(full.dim);
    v << s.x.flatten(), s.y;
    s.traj.final_kkt_residual = kkt_residual(full, v, m).total();
  } else {
    s.traj.failed = true;
    s.traj.failure_reason = "subproblem infeasible at final iterate";
  }
  return s.traj;
}

}  // namespace decomp
