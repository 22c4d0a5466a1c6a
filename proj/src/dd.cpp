#include "decomp/dd.hpp"

#include <chrono>
#include <cmath>

#include "decomp/parallel.hpp"

namespace decomp {

double partial_lagrangian(const ProblemDD& p, int i, const VectorXd& xi, const VectorXd& mu,
                          const VectorXd& lambda) {
  const auto& gc = p.g_coupled[static_cast<size_t>(i)];
  const auto& hc = p.h_coupled[static_cast<size_t>(i)];
  if (mu.size() != gc.dim_out || lambda.size() != hc.dim_out)
    throw DimensionMismatch("partial_lagrangian: dual dimensions");
  double v = p.f[static_cast<size_t>(i)].value(xi);
  if (gc.dim_out) v += mu.dot(gc.value(xi));
  if (hc.dim_out) v += lambda.dot(hc.value(xi));
  return v;
}

VectorXd partial_lagrangian_grad(const ProblemDD& p, int i, const VectorXd& xi,
                                 const VectorXd& mu, const VectorXd& lambda) {
  const auto& gc = p.g_coupled[static_cast<size_t>(i)];
  const auto& hc = p.h_coupled[static_cast<size_t>(i)];
  VectorXd g = p.f[static_cast<size_t>(i)].grad(xi);
  if (gc.dim_out) g += gc.grad(xi) * mu;
  if (hc.dim_out) g += hc.grad(xi) * lambda;
  return g;
}

Nlp make_dd_subproblem(const ProblemDD& p, int i, const VectorXd& mu, const VectorXd& lambda) {
  Nlp nlp;
  nlp.dim = p.block_dims[static_cast<size_t>(i)];
  ProblemDD const* pp = &p;
  nlp.objective = [pp, i, mu, lambda](const VectorXd& x) {
    return partial_lagrangian(*pp, i, x, mu, lambda);
  };
  nlp.objective_grad = [pp, i, mu, lambda](const VectorXd& x) {
    return partial_lagrangian_grad(*pp, i, x, mu, lambda);
  };
  nlp.ineq = p.g_block[static_cast<size_t>(i)];
  nlp.eq.dim_in = nlp.dim;
  nlp.eq.dim_out = 0;
  nlp.eq.value = [](const VectorXd&) { return VectorXd(0); };
  nlp.eq.grad = [d = nlp.dim](const VectorXd&) { return MatrixXd(d, 0); };
  nlp.box = p.x_sets[static_cast<size_t>(i)];
  return nlp;
}

std::pair<VectorXd, MultiplierSet> solve_subproblem_dd(const ProblemDD& p, int i,
                                                       const VectorXd& mu,
                                                       const VectorXd& lambda,
                                                       const VectorXd* warm) {
  if (!p.block_solver) throw std::runtime_error("ProblemDD has no block solver attached");
  VectorXd x = p.block_solver(i, mu, lambda, warm);
  Nlp nlp = make_dd_subproblem(p, i, mu, lambda);
  return {x, recover_multipliers(nlp, x)};
}

std::pair<VectorXd, VectorXd> dual_gradients(const ProblemDD& p, const BlockVector& x) {
  VectorXd gmu = VectorXd::Zero(p.coupled_ineq_dim);
  VectorXd glam = VectorXd::Zero(p.coupled_eq_dim);
  for (int i = 0; i < p.block_count; ++i) {
    const auto& xi = x.blocks[static_cast<size_t>(i)];
    if (!p.g_coupled[static_cast<size_t>(i)].empty())
      gmu += p.g_coupled[static_cast<size_t>(i)].value(xi);
    if (!p.h_coupled[static_cast<size_t>(i)].empty())
      glam += p.h_coupled[static_cast<size_t>(i)].value(xi);
  }
  return {gmu, glam};
}

std::pair<VectorXd, VectorXd> closed_form_dual_update(const VectorXd& mu, const VectorXd& lambda,
                                                      const VectorXd& grad_mu,
                                                      const VectorXd& grad_lambda, double tau_mu,
                                                      double tau_lambda) {
  VectorXd mu_star = (mu + grad_mu / tau_mu).cwiseMax(0.0);
  VectorXd lambda_star = lambda + grad_lambda / tau_lambda;
  return {mu_star, lambda_star};
}

DDState dd_init(const ProblemDD& p, const VectorXd& mu0, const VectorXd& lambda0) {
  if (mu0.size() != p.coupled_ineq_dim || lambda0.size() != p.coupled_eq_dim)
    throw DimensionMismatch("dd_init: dual dimensions");
  DDState s;
  s.mu = mu0.cwiseMax(0.0);
  s.lambda = lambda0;
  s.x.blocks.resize(static_cast<size_t>(p.block_count));
  s.mult.resize(static_cast<size_t>(p.block_count));
  return s;
}

namespace {

void evaluate_blocks(DDState& s, const ProblemDD& p, int threads) {
  const bool warm = s.has_x;
  BlockVector prev = s.x;
  parallel_for(p.block_count, threads, [&](int i) {
    const VectorXd* w = warm ? &prev.blocks[static_cast<size_t>(i)] : nullptr;
    auto [x, m] = solve_subproblem_dd(p, i, s.mu, s.lambda, w);
    s.x.blocks[static_cast<size_t>(i)] = x;
    s.mult[static_cast<size_t>(i)] = m;
  });
  s.has_x = true;
}

}  // namespace

void dd_iterate(DDState& s, const ProblemDD& p, const DDConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const double base_time = s.traj.entries.empty() ? 0.0 : s.traj.entries.back().time_s;

  evaluate_blocks(s, p, cfg.threads);
  TrajectoryEntry entry;
  entry.objective = objective(p, s.x);
  entry.violations = violation_metrics(p, s.x);

  auto [gmu, glam] = dual_gradients(p, s.x);
  s.grad_mu = gmu;
  s.grad_lambda = glam;
  auto [mu_star, lambda_star] = closed_form_dual_update(s.mu, s.lambda, gmu, glam, cfg.tau_mu,
                                                        cfg.tau_lambda);
  const double gamma = outer_step(cfg.step, s.k);
  VectorXd mu_next = smooth_update(s.mu, mu_star, gamma);
  VectorXd lambda_next = smooth_update(s.lambda, lambda_star, gamma);

  entry.step = gamma;
  entry.displacement =
      std::sqrt((mu_next - s.mu).squaredNorm() + (lambda_next - s.lambda).squaredNorm());
  entry.time_s =
      base_time + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  s.traj.entries.push_back(entry);

  s.mu = mu_next;
  s.lambda = lambda_next;
  ++s.k;

  double dual_norm = std::sqrt(s.mu.squaredNorm() + s.lambda.squaredNorm());
  if (dual_norm > cfg.dual_guard) {
    s.diverged = true;
    s.traj.failed = true;
    s.traj.failure_reason = "dual iterates exceeded the runaway guard";
  }
}

Trajectory run_dd(const ProblemDD& p, const VectorXd& mu0, const VectorXd& lambda0,
                  const DDConfig& cfg, int max_outer) {
  DDState s = dd_init(p, mu0, lambda0);
  for (int k = 0; k < max_outer && !s.diverged; ++k) dd_iterate(s, p, cfg);

  if (!s.diverged) {
    const auto t0 = std::chrono::steady_clock::now();
    const double base_time = s.traj.entries.empty() ? 0.0 : s.traj.entries.back().time_s;
    evaluate_blocks(s, p, cfg.threads);
    TrajectoryEntry entry;
    entry.objective = objective(p, s.x);
    entry.violations = violation_metrics(p, s.x);
    entry.time_s =
        base_time + std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    s.traj.entries.push_back(entry);

    Nlp full = full_nlp(p);
    MultiplierSet m = assemble_dd_multipliers(p, s.mu, s.lambda, s.mult);
    s.traj.final_kkt_residual = kkt_residual(full, s.x.flatten(), m).total();
  }
  return s.traj;
}

}  // namespace decomp
