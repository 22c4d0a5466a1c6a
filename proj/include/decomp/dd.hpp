#pragma once

#include "decomp/kkt.hpp"
#include "decomp/sca.hpp"
#include "decomp/trajectory.hpp"

namespace decomp {

struct DDConfig {
  StepSchedule step;
  double tau_mu = 1.0;
  double tau_lambda = 1.0;
  int threads = 1;
  double dual_guard = 1e6;  // abort when ||(mu, lambda)|| exceeds this
};

struct DDState {
  int k = 0;
  VectorXd mu;      // >= 0 componentwise at every iteration
  VectorXd lambda;
  BlockVector x;    // stationary points at the last evaluated duals
  bool has_x = false;
  std::vector<MultiplierSet> mult;  // block-local multipliers (logged, not used in updates)
  VectorXd grad_mu, grad_lambda;
  Trajectory traj;
  bool diverged = false;
};

double partial_lagrangian(const ProblemDD& p, int i, const VectorXd& xi, const VectorXd& mu,
                          const VectorXd& lambda);
VectorXd partial_lagrangian_grad(const ProblemDD& p, int i, const VectorXd& xi,
                                 const VectorXd& mu, const VectorXd& lambda);

// Subproblem view: min L_i(., mu, lambda) s.t. g_block_i <= 0, x_i in X_i.
Nlp make_dd_subproblem(const ProblemDD& p, int i, const VectorXd& mu, const VectorXd& lambda);

// Stationary point (branch-tracked toward `warm` when given) plus its
// block-local multipliers.
std::pair<VectorXd, MultiplierSet> solve_subproblem_dd(const ProblemDD& p, int i,
                                                       const VectorXd& mu,
                                                       const VectorXd& lambda,
                                                       const VectorXd* warm = nullptr);

// (sum_i g_coupled_i(x_i), sum_i h_coupled_i(x_i)), fixed block order.
std::pair<VectorXd, VectorXd> dual_gradients(const ProblemDD& p, const BlockVector& x);

// mu* = [mu + grad_mu / tau_mu]_+, lambda* = lambda + grad_lambda / tau_lambda.
std::pair<VectorXd, VectorXd> closed_form_dual_update(const VectorXd& mu, const VectorXd& lambda,
                                                      const VectorXd& grad_mu,
                                                      const VectorXd& grad_lambda, double tau_mu,
                                                      double tau_lambda);

DDState dd_init(const ProblemDD& p, const VectorXd& mu0, const VectorXd& lambda0);

void dd_iterate(DDState& s, const ProblemDD& p, const DDConfig& cfg);

Trajectory run_dd(const ProblemDD& p, const VectorXd& mu0, const VectorXd& lambda0,
                  const DDConfig& cfg, int max_outer);

}  // namespace decomp
