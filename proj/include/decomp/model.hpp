#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

namespace decomp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Oracles. Gradients follow the convention grad(f) in R^{n x m} for
// f: R^n -> R^m, i.e. the transpose of the Jacobian.
// ---------------------------------------------------------------------------

struct FunctionOracle {
  int dim = 0;
  std::function<double(const VectorXd&)> value;
  std::function<VectorXd(const VectorXd&)> grad;
};

struct VectorOracle {
  int dim_in = 0;
  int dim_out = 0;
  std::function<VectorXd(const VectorXd&)> value;
  std::function<MatrixXd(const VectorXd&)> grad;  // dim_in x dim_out

  bool empty() const { return dim_out == 0; }
};

// f(x, y) with separate partial gradients.
struct BivariateFunction {
  std::function<double(const VectorXd&, const VectorXd&)> value;
  std::function<VectorXd(const VectorXd&, const VectorXd&)> grad_x;
  std::function<VectorXd(const VectorXd&, const VectorXd&)> grad_y;
};

// g(x, y) in R^m with partial gradients n_x x m and n_y x m.
struct BivariateMap {
  int dim_out = 0;
  std::function<VectorXd(const VectorXd&, const VectorXd&)> value;
  std::function<MatrixXd(const VectorXd&, const VectorXd&)> grad_x;
  std::function<MatrixXd(const VectorXd&, const VectorXd&)> grad_y;

  bool empty() const { return dim_out == 0; }
};

VectorOracle empty_vector_oracle(int dim_in);
BivariateMap empty_bivariate_map();

// Central finite differences with step 1e-6 * max(1, |coordinate|).
VectorXd fd_gradient(const std::function<double(const VectorXd&)>& f, const VectorXd& x);
MatrixXd fd_gradient_map(const std::function<VectorXd(const VectorXd&)>& f, const VectorXd& x,
                         int dim_out);

// ---------------------------------------------------------------------------
// Convex sets (boxes) and block vectors.
// ---------------------------------------------------------------------------

struct BoxSet {
  VectorXd lower;  // entries may be -inf
  VectorXd upper;  // entries may be +inf

  static BoxSet unbounded(int n);
  static BoxSet interval(double lo, double hi, int n = 1);

  int dim() const { return static_cast<int>(lower.size()); }
  VectorXd project(const VectorXd& x) const;
  bool contains(const VectorXd& x, double tol = 1e-12) const;
  // Strictly inside all finite bounds by at least `margin`.
  bool is_interior(const VectorXd& x, double margin = 1e-9) const;
  // Product of two boxes (concatenation).
  BoxSet product(const BoxSet& other) const;
};

struct BlockVector {
  std::vector<VectorXd> blocks;

  BlockVector() = default;
  explicit BlockVector(std::vector<VectorXd> b) : blocks(std::move(b)) {}

  int block_count() const { return static_cast<int>(blocks.size()); }
  int total_dim() const;
  VectorXd flatten() const;
  static BlockVector unflatten(const VectorXd& v, const std::vector<int>& dims);
};

// ---------------------------------------------------------------------------
// Problem families.
// ---------------------------------------------------------------------------

// Coupling-variable family: min f0(y) + sum_i f_i(x_i, y)
//   s.t. g_coupled_i(x_i, y) <= 0, h_coupled_i(x_i, y) = 0,
//        g_block_i(x_i) <= 0, x_i in X_i, g0(y) <= 0, y in Y.
struct ProblemPD {
  int block_count = 0;
  int y_dim = 0;
  std::vector<int> block_dims;

  std::vector<BivariateFunction> f;
  std::vector<BivariateMap> g_coupled;
  std::vector<BivariateMap> h_coupled;
  std::vector<VectorOracle> g_block;
  std::vector<BoxSet> x_sets;

  FunctionOracle f0;
  VectorOracle g0;
  BoxSet y_set;

  // Optional hooks filled in by instance builders (e.g. the examples):
  // a stationary-point solver for the per-block subproblem at fixed y, and a
  // closed-form master solve (y_k, summed master gradient, tau) -> y*.
  std::function<VectorXd(int i, const VectorXd& y)> block_solver;
  std::function<VectorXd(const VectorXd& y_k, const VectorXd& grad, double tau)> master_solver;
};

// Same family with affine coupled equalities A_x[i] x_i + A_y[i] y + b[i] = 0.
struct ProblemSPD {
  int block_count = 0;
  int y_dim = 0;
  std::vector<int> block_dims;

  std::vector<BivariateFunction> f;
  std::vector<BivariateMap> g_coupled;
  std::vector<MatrixXd> a_x;  // m_i x n_i (may be 0 x n_i)
  std::vector<MatrixXd> a_y;  // m_i x n_0
  std::vector<VectorXd> b_eq;
  std::vector<VectorOracle> g_block;
  std::vector<BoxSet> x_sets;

  FunctionOracle f0;
  VectorOracle g0;
  BoxSet y_set;

  // View of this instance as a ProblemPD (equalities become oracles).
  ProblemPD as_pd() const;
};

// Coupling-constraint family: min sum_i f_i(x_i)
//   s.t. sum_i g_coupled_i(x_i) <= 0 (dim r shared),
//        sum_i h_coupled_i(x_i) = 0 (dim m shared),
//        g_block_i(x_i) <= 0, x_i in X_i.
struct ProblemDD {
  int block_count = 0;
  std::vector<int> block_dims;
  int coupled_ineq_dim = 0;
  int coupled_eq_dim = 0;

  std::vector<FunctionOracle> f;
  std::vector<VectorOracle> g_coupled;
  std::vector<VectorOracle> h_coupled;
  std::vector<VectorOracle> g_block;
  std::vector<BoxSet> x_sets;

  // Stationary point of min L_i over {g_block_i <= 0} ∩ X_i; `warm`, when
  // non-null, requests the stationary branch nearest to it.
  std::function<VectorXd(int i, const VectorXd& mu, const VectorXd& lambda, const VectorXd* warm)>
      block_solver;
};

// Same family with affine coupled equality sum_i A[i] x_i + b = 0.
struct ProblemSDD {
  int block_count = 0;
  std::vector<int> block_dims;
  int coupled_ineq_dim = 0;
  int coupled_eq_dim = 0;

  std::vector<FunctionOracle> f;
  std::vector<VectorOracle> g_coupled;
  std::vector<MatrixXd> a;  // m x n_i
  VectorXd b;
  std::vector<VectorOracle> g_block;
  std::vector<BoxSet> x_sets;

  ProblemDD as_dd() const;
};

// ---------------------------------------------------------------------------
// Shared evaluations.
// ---------------------------------------------------------------------------

double objective(const ProblemPD& p, const BlockVector& x, const VectorXd& y);
double objective(const ProblemSPD& p, const BlockVector& x, const VectorXd& y);
double objective(const ProblemDD& p, const BlockVector& x);
double objective(const ProblemSDD& p, const BlockVector& x);

struct ViolationMetrics {
  double mean_ineq = 0.0;      // (1/I) sum_i ||[g_i]_+||_inf over coupled inequalities
  double max_ineq = 0.0;       // max_i ||[g_i]_+||_inf
  double max_eq = 0.0;         // max_i ||h_i||_inf (coupled equalities)
  double ineq_coupling = 0.0;  // ||[sum_i g_i]_+||_inf for the coupling-constraint families
  double coupling = 0.0;       // max of inequality and equality coupling violations
};

ViolationMetrics violation_metrics(const ProblemPD& p, const BlockVector& x, const VectorXd& y);
ViolationMetrics violation_metrics(const ProblemSPD& p, const BlockVector& x, const VectorXd& y);
ViolationMetrics violation_metrics(const ProblemDD& p, const BlockVector& x);
ViolationMetrics violation_metrics(const ProblemSDD& p, const BlockVector& x);

}  // namespace decomp
