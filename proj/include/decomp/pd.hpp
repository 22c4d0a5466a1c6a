#pragma once

#include "decomp/kkt.hpp"
#include "decomp/sca.hpp"
#include "decomp/trajectory.hpp"

namespace decomp {

struct SubproblemInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RecoveryFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ApproxMasterInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PDConfig {
  StepSchedule step;
  double tau = 0.0;
  int threads = 1;
  double master_tol = 1e-10;
};

struct PDState {
  int k = 0;
  VectorXd y;
  VectorXd y_prev;
  bool has_prev = false;
  BlockVector x;                     // stationary points at the last evaluated y
  std::vector<MultiplierSet> mult;   // their subproblem multipliers
  VectorXd master_grad;
  Trajectory traj;
};

// Subproblem view at fixed y: min f_i(., y) s.t. coupled and block
// constraints, x_i in X_i. Coupled rows come first.
Nlp make_pd_subproblem(const ProblemPD& p, int i, const VectorXd& y);

// Stationary point via the problem's block solver, multipliers via the KKT
// system (interior) or KKT conditions (boundary).
std::pair<VectorXd, MultiplierSet> solve_subproblem_pd(const ProblemPD& p, int i,
                                                       const VectorXd& y);

// grad_y f_i + grad_y g_coupled_i mu_i + grad_y h_coupled_i lambda_i at the
// block stationary point.
VectorXd master_gradient_block(const ProblemPD& p, int i, const VectorXd& y, const VectorXd& xi,
                               const MultiplierSet& m);

// Unique minimizer of F0(y;y_k) + tau/2 ||y-y_k||^2 + grad^T (y-y_k) over
// Y ∩ {G0 <= 0}. Uses the problem's closed-form master solver when present,
// otherwise projected gradient to `tol`.
VectorXd solve_approx_master(const ProblemPD& p, const VectorXd& y_k, const VectorXd& grad,
                             double tau, double tol = 1e-10);

// delta scan 1, 1/2, ..., 2^-20 over y_prev + delta (y_k - y_prev); first
// candidate accepted by `feasible` wins. Throws RecoveryFailed.
VectorXd infeasible_recovery(const VectorXd& y_k, const VectorXd& y_prev,
                             const std::function<bool(const VectorXd&)>& feasible);

PDState pd_init(const ProblemPD& p, const VectorXd& y0);

// One outer iteration: parallel block solves at y(k), multiplier recovery,
// master gradient reduction in block order, approximate master solve,
// smoothing update. Records the trajectory entry for iterate k.
void pd_iterate(PDState& s, const ProblemPD& p, const PDConfig& cfg);

// Runs max_outer iterations plus a final evaluation pass; fills the final
// full-problem KKT residual from the assembled point and multipliers.
Trajectory run_pd(const ProblemPD& p, const VectorXd& y0, const PDConfig& cfg, int max_outer);

}  // namespace decomp
