#include "decomp/sdd.hpp"

#include <chrono>
#include <cmath>

#include "decomp/parallel.hpp"
#include "decomp/dd.hpp"

namespace decomp {

double SDDApprox::lagrangian_value(const BlockVector& x, const VectorXd& mu,
                                   const VectorXd& lambda) const {
  double v = lambda.size() ? lambda.dot(b) : 0.0;
  for (size_t i = 0; i < blocks.size(); ++i) {
    const auto& xi = x.blocks[i];
    v += blocks[i].f.value(xi);
    if (blocks[i].g_coupled.dim_out) v += mu.dot(blocks[i].g_coupled.value(xi));
    if (lambda.size() && a[i].rows() > 0) v += lambda.dot(a[i] * xi);
  }
  return v;
}

SDDApprox build_sdd_approx(const ProblemSDD& p, const BlockVector& x, const SurrogateParams& sp) {
  if (sp.tau <= 0.0)
    throw SpecViolation("build_sdd_approx: tau must be positive for the generic builder");
  SDDApprox ap;
  ap.anchor = x;
  ap.a = p.a;
  ap.b = p.b;
  ap.coupled_ineq_dim = p.coupled_ineq_dim;

  for (int i = 0; i < p.block_count; ++i) {
    const auto& f = p.f[static_cast<size_t>(i)];
    const auto& gc = p.g_coupled[static_cast<size_t>(i)];
    const VectorXd xi = x.blocks[static_cast<size_t>(i)];
    const VectorXd gx = f.grad(xi);
    const double tau = sp.tau;
    const double cl = sp.curvature_l;

    SddBlockApprox b;
    b.f.dim = static_cast<int>(xi.size());
    b.f.value = [gx, xi, tau](const VectorXd& xx) {
      VectorXd d = xx - xi;
      return gx.dot(d) + 0.5 * tau * d.squaredNorm();
    };
    b.f.grad = [gx, xi, tau](const VectorXd& xx) -> VectorXd { return gx + tau * (xx - xi); };

    const int r = gc.dim_out;
    MatrixXd rows(r, xi.size());
    VectorXd shift(r);
    if (r) {
      rows = gc.grad(xi).transpose();
      shift = gc.value(xi) - rows * xi;
    }
    b.g_coupled.dim_in = static_cast<int>(xi.size());
    b.g_coupled.dim_out = r;
    b.g_coupled.value = [rows, shift, cl, xi](const VectorXd& xx) -> VectorXd {
      if (!rows.rows()) return VectorXd(0);
      return rows * xx + shift + VectorXd::Constant(rows.rows(), 0.5 * cl * (xx - xi).squaredNorm());
    };
    b.g_coupled.grad = [rows, cl, xi](const VectorXd& xx) -> MatrixXd {
      if (!rows.rows()) return MatrixXd(xx.size(), 0);
      MatrixXd g = rows.transpose();
      for (int j = 0; j < g.cols(); ++j) g.col(j) += cl * (xx - xi);
      return g;
    };
    b.g_block = p.g_block[static_cast<size_t>(i)];
    if (!b.g_block.empty())
      throw SpecViolation("generic sdd builder does not handle block-local inequalities");

    const MatrixXd ai = p.a[static_cast<size_t>(i)];
    const BoxSet box = p.x_sets[static_cast<size_t>(i)];
    b.solver = [gx, xi, tau, rows, shift, cl, ai, box](const VectorXd& mu,
                                                       const VectorXd& lambda) -> VectorXd {
      // Strongly convex, so projected gradient with fixed step converges
      // linearly; curvature bounded by tau + mu cl + row norms.
      VectorXd lin = gx;
      if (rows.rows()) lin += rows.transpose() * mu;
      if (ai.rows() > 0) lin += ai.transpose() * lambda;
      double curv = tau + (mu.size() ? mu.sum() * cl : 0.0);
      VectorXd v = box.project(xi);
      for (int it = 0; it < 5000; ++it) {
        VectorXd grad = lin + tau * (v - xi);
        if (mu.size() && cl > 0) grad += mu.sum() * cl * (v - xi);
        VectorXd next = box.project(v - grad / curv);
        if ((next - v).cwiseAbs().maxCoeff() < 1e-13) return next;
        v = next;
      }
      return v;
    };
    ap.blocks.push_back(std::move(b));
  }
  return ap;
}

VectorXd solve_subproblem_sdd(const SDDApprox& a, int i, const VectorXd& mu,
                              const VectorXd& lambda) {
  return a.blocks[static_cast<size_t>(i)].solver(mu, lambda);
}

SddInnerResult inner_dual_ascent(const SDDApprox& a, const VectorXd& mu0, const VectorXd& lambda0,
                                 const InnerStepSchedule& sched, double sigma, int T, int threads,
                                 int t0) {
  const int nblocks = static_cast<int>(a.blocks.size());
  SddInnerResult res;
  res.mu = mu0.cwiseMax(0.0);
  res.lambda = lambda0;
  res.x.blocks.resize(static_cast<size_t>(nblocks));

  double prev_q = 0.0;
  double gamma = inner_step(sched, t0);
  for (int pass = 0; pass < std::max(1, T); ++pass) {
    parallel_for(nblocks, threads, [&](int i) {
      res.x.blocks[static_cast<size_t>(i)] =
          a.blocks[static_cast<size_t>(i)].solver(res.mu, res.lambda);
    });
    res.iterations = pass + 1;
    double q = a.lagrangian_value(res.x, res.mu, res.lambda);
    if (pass >= 1) {
      res.last_rel_change = std::fabs(q - prev_q) / std::max(std::fabs(prev_q), 1e-300);
      if (std::fabs(q - prev_q) <= sigma * std::fabs(prev_q)) break;
    }
    prev_q = q;
    if (pass + 1 >= std::max(1, T)) break;

    VectorXd grad_mu = VectorXd::Zero(res.mu.size());
    VectorXd grad_lambda = a.b;
    for (int i = 0; i < nblocks; ++i) {
      const auto& xi = res.x.blocks[static_cast<size_t>(i)];
      if (a.blocks[static_cast<size_t>(i)].g_coupled.dim_out)
        grad_mu += a.blocks[static_cast<size_t>(i)].g_coupled.value(xi);
      if (res.lambda.size() && a.a[static_cast<size_t>(i)].rows() > 0)
        grad_lambda += a.a[static_cast<size_t>(i)] * xi;
    }
    res.mu = (res.mu + gamma * grad_mu).cwiseMax(0.0);
    if (res.lambda.size()) res.lambda += gamma * grad_lambda;
    ++res.updates;
    gamma = gamma * (1.0 - sched.beta_in * gamma);
  }
  return res;
}

SDDState sdd_init(const ProblemSDD& p, const BlockVector& x0, const VectorXd& mu0,
                  const VectorXd& lambda0) {
  if (x0.block_count() != p.block_count) throw DimensionMismatch("sdd_init: block count");
  if (mu0.size() != p.coupled_ineq_dim || lambda0.size() != static_cast<int>(p.b.size()))
    throw DimensionMismatch("sdd_init: dual dimensions");
  SDDState s;
  s.x = x0;
  s.mu = mu0.cwiseMax(0.0);
  s.lambda = lambda0;
  return s;
}

void sdd_iterate(SDDState& s, const ProblemSDD& p, const SDDConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const double base_time = s.traj.entries.empty() ? 0.0 : s.traj.entries.back().time_s;

  SDDApprox approx = cfg.build ? cfg.build(p, s.x) : build_sdd_approx(p, s.x, cfg.surrogate);
  SddInnerResult inner = inner_dual_ascent(approx, s.mu, s.lambda, cfg.inner, cfg.sigma, cfg.T,
                                           cfg.threads, s.inner_steps);
  s.inner_steps += inner.updates;

  const double gamma = outer_step(cfg.outer, s.k);
  BlockVector x_next = smooth_update(s.x, inner.x, gamma);

  TrajectoryEntry entry;
  entry.objective = objective(p, s.x);
  entry.violations = violation_metrics(p, s.x);
  entry.step = gamma;
  double disp2 = 0.0;
  for (int i = 0; i < p.block_count; ++i)
    disp2 += (x_next.blocks[static_cast<size_t>(i)] - s.x.blocks[static_cast<size_t>(i)])
                 .squaredNorm();
  entry.displacement = std::sqrt(disp2);
  entry.time_s =
      base_time + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.traj.entries.push_back(entry);
  s.traj.inner_gap = inner.last_rel_change;

  s.x = x_next;
  s.mu = inner.mu;  // warm start for the next outer iteration
  s.lambda = inner.lambda;
  ++s.k;
}

Trajectory run_sdd(const ProblemSDD& p, const BlockVector& x0, const VectorXd& mu0,
                   const VectorXd& lambda0, const SDDConfig& cfg, int max_outer) {
  SDDState s = sdd_init(p, x0, mu0, lambda0);
  for (int k = 0; k < max_outer; ++k) sdd_iterate(s, p, cfg);

  TrajectoryEntry entry;
  entry.objective = objective(p, s.x);
  entry.violations = violation_metrics(p, s.x);
  entry.time_s = s.traj.entries.empty() ? 0.0 : s.traj.entries.back().time_s;
  s.traj.entries.push_back(entry);

  // Coupling duals from the final inner ascent; block-local bound
  // multipliers fitted per block.
  ProblemDD dd = p.as_dd();
  std::vector<MultiplierSet> bm(static_cast<size_t>(p.block_count));
  for (int i = 0; i < p.block_count; ++i)
    bm[static_cast<size_t>(i)] =
        fit_multipliers(make_dd_subproblem(dd, i, s.mu, s.lambda),
                        s.x.blocks[static_cast<size_t>(i)], 1e-5);
  Nlp full = full_nlp(dd);
  MultiplierSet m = assemble_dd_multipliers(dd, s.mu, s.lambda, bm);
  s.traj.final_kkt_residual = kkt_residual(full, s.x.flatten(), m).total();
  return s.traj;
}

}  // namespace decomp
