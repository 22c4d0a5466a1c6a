#pragma once

#include "decomp/kkt.hpp"
#include "decomp/sca.hpp"
#include "decomp/trajectory.hpp"

namespace decomp {

struct SpecViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Knobs shared by the approximate-problem builders.
struct SurrogateParams {
  double tau = 0.0;
  double tau_x = 0.0;
  double tau_y = 0.0;
  double curvature_l = 0.0;  // quadratic upper-bound constant for constraint majorants
};

// One block of the convex approximate problem: separable objective
// F_i = f_x(x_i) + f_y(y), coupled majorant G~_i(x_i, y) = g_coupled_x(x_i) + C y.
struct SpdBlockApprox {
  FunctionOracle f_x;
  FunctionOracle f_y;
  VectorOracle g_coupled_x;
  MatrixXd c;             // r_i x n0
  VectorOracle g_block;
  // Exact solver of the convex subproblem at fixed y; returns the unique
  // optimal point and its optimal multipliers (coupled rows first).
  std::function<std::pair<VectorXd, MultiplierSet>(const VectorXd& y)> solver;
};

struct SPDApprox {
  std::vector<SpdBlockApprox> blocks;
  FunctionOracle f0;   // F0(.; y_k)
  VectorOracle g0;     // G0(.; y_k)
  BlockVector anchor_x;
  VectorXd anchor_y;
  std::vector<MatrixXd> a_y;  // equality row blocks, empty when no equalities
  BoxSet y_set;
  std::function<VectorXd(const VectorXd&)> project_master;  // onto C(k)

  double objective_value(const BlockVector& x, const VectorXd& y) const;
};

using SpdApproxBuilder =
    std::function<SPDApprox(const ProblemSPD&, const BlockVector& x, const VectorXd& y)>;

// Generic builder: Taylor surrogates for f_i and f0, full linearization plus
// prox curvature for the coupled inequalities. Majorization holds only when
// the linearized parts are concave; verify_surrogate reports otherwise.
SPDApprox build_spd_approx(const ProblemSPD& p, const BlockVector& x, const VectorXd& y,
                           const SurrogateParams& sp);

std::pair<VectorXd, MultiplierSet> solve_subproblem_spd(const SPDApprox& a, int i,
                                                        const VectorXd& y);

// grad F0 + sum_i (grad f_y + C_i^T mu_i + A_{i,y}^T lambda_i).
VectorXd master_subgradient(const SPDApprox& a, const VectorXd& y,
                            const std::vector<MultiplierSet>& mults);

struct SpdInnerResult {
  BlockVector x;
  VectorXd y;
  std::vector<MultiplierSet> mult;
  int iterations = 0;
  double last_rel_change = 0.0;
};

// Projected-subgradient loop on the convex master; stops on the relative
// objective-change criterion (sigma) or after T block-solve passes.
SpdInnerResult inner_loop(const SPDApprox& a, const VectorXd& y_init,
                          const InnerStepSchedule& sched, double sigma, int T, int threads);

struct SPDConfig {
  StepSchedule outer;
  InnerStepSchedule inner;
  double sigma = 0.05;
  int T = 10;
  int threads = 1;
  SurrogateParams surrogate;
  SpdApproxBuilder build;  // defaults to build_spd_approx with `surrogate`
};

struct SPDState {
  int k = 0;
  BlockVector x;
  VectorXd y;
  Trajectory traj;
};

SPDState spd_init(const ProblemSPD& p, const BlockVector& x0, const VectorXd& y0);
void spd_iterate(SPDState& s, const ProblemSPD& p, const SPDConfig& cfg);
Trajectory run_spd(const ProblemSPD& p, const BlockVector& x0, const VectorXd& y0,
                   const SPDConfig& cfg, int max_outer);

}  // namespace decomp
