#pragma once

#include "decomp/kkt.hpp"
#include "decomp/sca.hpp"
#include "decomp/spd.hpp"
#include "decomp/trajectory.hpp"

namespace decomp {

struct SddBlockApprox {
  FunctionOracle f;        // F_i(.; x_i_k), strongly convex
  VectorOracle g_coupled;  // G~_i(.; x_i_k), dim r shared
  VectorOracle g_block;    // G_i
  // Unique optimal point of min F_i + mu^T G~_i + lambda^T A_i x over
  // {G_i <= 0} ∩ X_i.
  std::function<VectorXd(const VectorXd& mu, const VectorXd& lambda)> solver;
};

struct SDDApprox {
  std::vector<SddBlockApprox> blocks;
  std::vector<MatrixXd> a;
  VectorXd b;
  BlockVector anchor;
  int coupled_ineq_dim = 0;

  double lagrangian_value(const BlockVector& x, const VectorXd& mu, const VectorXd& lambda) const;
};

using SddApproxBuilder = std::function<SDDApprox(const ProblemSDD&, const BlockVector& x)>;

// Generic builder: Taylor surrogate for f_i, linearization plus L-curvature
// majorant for the coupled inequalities.
SDDApprox build_sdd_approx(const ProblemSDD& p, const BlockVector& x, const SurrogateParams& sp);

VectorXd solve_subproblem_sdd(const SDDApprox& a, int i, const VectorXd& mu,
                              const VectorXd& lambda);

struct SddInnerResult {
  VectorXd mu, lambda;
  BlockVector x;
  int iterations = 0;
  int updates = 0;  // dual updates taken (consumed step-schedule entries)
  double last_rel_change = 0.0;
};

// Projected gradient ascent on the concave dual of the approximate problem:
// grad_mu = sum_i G~_i(x_i*), grad_lambda = sum_i A_i x_i* + b. The step
// sequence starts at index `t0`: the dual state is warm-started across outer
// iterations, so the diminishing schedule continues rather than restarting.
SddInnerResult inner_dual_ascent(const SDDApprox& a, const VectorXd& mu0, const VectorXd& lambda0,
                                 const InnerStepSchedule& sched, double sigma, int T, int threads,
                                 int t0 = 0);

struct SDDConfig {
  StepSchedule outer;
  InnerStepSchedule inner;
  double sigma = 0.05;
  int T = 10;
  int threads = 1;
  SurrogateParams surrogate;
  SddApproxBuilder build;
};

struct SDDState {
  int k = 0;
  BlockVector x;
  VectorXd mu, lambda;  // inner warm-start duals (previous outer's final duals)
  int inner_steps = 0;  // cumulative dual updates, indexes the step schedule
  Trajectory traj;
};

SDDState sdd_init(const ProblemSDD& p, const BlockVector& x0, const VectorXd& mu0,
                  const VectorXd& lambda0);
void sdd_iterate(SDDState& s, const ProblemSDD& p, const SDDConfig& cfg);
Trajectory run_sdd(const ProblemSDD& p, const BlockVector& x0, const VectorXd& mu0,
                   const VectorXd& lambda0, const SDDConfig& cfg, int max_outer);

}  // namespace decomp
