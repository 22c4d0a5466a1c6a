#pragma once

#include "decomp/model.hpp"

namespace decomp {

// A single nonlinear program over a box, the common currency for KKT
// checks. Per-block subproblems and whole problems are both materialized as
// Nlp closures. The leading `coupled_ineq` inequality rows and `coupled_eq`
// equality rows are the coupling constraints of the originating problem, so
// callers can slice the recovered multipliers.
struct Nlp {
  int dim = 0;
  std::function<double(const VectorXd&)> objective;
  std::function<VectorXd(const VectorXd&)> objective_grad;
  VectorOracle ineq;  // g(x) <= 0
  VectorOracle eq;    // h(x) = 0
  BoxSet box;
  int coupled_ineq = 0;
  int coupled_eq = 0;
};

struct MultiplierSet {
  VectorXd ineq;         // one per inequality row, >= 0
  VectorXd eq;           // one per equality row
  VectorXd bound_lower;  // >= 0, zero where inactive or infinite
  VectorXd bound_upper;  // >= 0

  static MultiplierSet zeros(const Nlp& nlp);
};

struct ActiveSet {
  std::vector<int> indices;  // sorted, 0-based
  double tolerance = 0.0;
};

struct KKTResidual {
  double stationarity = 0.0;
  double complementarity = 0.0;
  double primal = 0.0;
  double dual = 0.0;

  double total() const;
};

struct NegativeMultiplier : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoMultipliers : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kActiveTolDefault = 1e-7;
inline constexpr double kRankTol = 1e-10;
inline constexpr double kCondThresholdDefault = 1e8;

// Indices j with |g_j| <= tol. Feasible-active band; strictly positive
// entries beyond tol are infeasibility, not activity.
ActiveSet active_set(const VectorXd& g_values, double tol);

// Residual of the KKT conditions at (x, multipliers). Stationarity is the
// projected-gradient form ||x - P_box(x - r)||_inf with
// r = grad f + grad g mu + grad h lambda - l + u, which reduces to ||r||_inf
// at interior points.
KKTResidual kkt_residual(const Nlp& nlp, const VectorXd& x, const MultiplierSet& m);

struct KktSystemSolution {
  MultiplierSet multipliers;
  double linear_residual = 0.0;
  bool rank_deficient = false;
};

// Least-squares solve of grad g_A mu + grad h lambda = -grad f with mu = 0
// off the active set. Interior stationary points only; boundary points go
// through solve_kkt_conditions. Throws NegativeMultiplier when the solution
// has mu_j < -1e-8.
KktSystemSolution solve_kkt_system(const Nlp& nlp, const VectorXd& x, const ActiveSet& active);

// Nonnegative least-squares over active constraints and active box bounds.
// Throws NoMultipliers when no multipliers bring the stationarity residual
// under 1e-8 (the point is not stationary).
MultiplierSet solve_kkt_conditions(const Nlp& nlp, const VectorXd& x,
                                   double active_tol = kActiveTolDefault);

// Interior points use the KKT system, boundary points the KKT conditions.
MultiplierSet recover_multipliers(const Nlp& nlp, const VectorXd& x,
                                  double active_tol = kActiveTolDefault);

// Same nonnegative least-squares fit as solve_kkt_conditions but without the
// stationarity gate: used to measure how stationary a point is when it need
// not be stationary at all.
MultiplierSet fit_multipliers(const Nlp& nlp, const VectorXd& x,
                              double active_tol = kActiveTolDefault);

struct InvertibilityProbe {
  bool invertible = false;
  double condition_estimate = 0.0;
};

// Condition estimate of the Jacobian of the KKT function w.r.t.
// (x, mu, lambda), finite-differenced with the active set frozen at x.
InvertibilityProbe kkt_jacobian_invertible(const Nlp& nlp, const VectorXd& x,
                                           const MultiplierSet& m,
                                           double cond_threshold = kCondThresholdDefault);

// ---------------------------------------------------------------------------
// Whole-problem views and multiplier assembly, used for end-of-run
// stationarity checks and the transform certificates.
// ---------------------------------------------------------------------------

// Variables (x_1,...,x_I, y); inequalities [g_coupled_1..I, g_block_1..I, g0];
// equalities [h_coupled_1..I].
Nlp full_nlp(const ProblemPD& p);
// Variables (x_1,...,x_I); inequalities [sum g_coupled, g_block_1..I];
// equalities [sum h_coupled].
Nlp full_nlp(const ProblemDD& p);

MultiplierSet assemble_pd_multipliers(const ProblemPD& p,
                                      const std::vector<MultiplierSet>& block_mults,
                                      const VectorXd& mu0);
MultiplierSet assemble_dd_multipliers(const ProblemDD& p, const VectorXd& mu_coupled,
                                      const VectorXd& lambda_coupled,
                                      const std::vector<MultiplierSet>& block_mults);

}  // namespace decomp
