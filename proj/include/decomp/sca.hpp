#pragma once

#include "decomp/model.hpp"

namespace decomp {

// Diminishing outer step: gamma(0) = gamma0, gamma(k) = 1/(alpha + beta k^eps)
// for k >= 1. gamma0 is a free initialization, independent of the formula.
struct StepSchedule {
  double gamma0 = 1.0;   // in (0, 1]
  double alpha = 1.0;    // >= 0
  double beta = 1.0;     // > 0
  double epsilon = 1.0;  // in (0, 1]
};

double outer_step(const StepSchedule& s, int k);

// Inner step recurrence gamma(t) = gamma(t-1) (1 - beta_in gamma(t-1)).
struct InnerStepSchedule {
  double gamma0 = 1.0;   // > 0
  double beta_in = 0.5;  // in (0, 1]
};

double inner_step(const InnerStepSchedule& s, int t);

enum class SurrogateVariant {
  kTaylorQuadratic,
  kDcLinearization,
  kKeepConvex,
  kPartialLinearization,
};

struct SurrogateSpec {
  double tau = 0.0;  // proximal weight, >= 0
  SurrogateVariant variant = SurrogateVariant::kTaylorQuadratic;
  double strong_convexity = 0.0;
};

// A Taylor-quadratic surrogate is strongly convex exactly with its proximal
// weight; the pure linearizations carry none of their own.
SurrogateSpec make_surrogate_spec(SurrogateVariant variant, double tau);

// F(y; anchor) = tau/2 ||y - anchor||^2 + g^T (y - anchor). Matches the
// original's gradient at the anchor by construction; its value there is 0.
FunctionOracle taylor_quadratic_surrogate(const VectorXd& grad_at_anchor, const VectorXd& anchor,
                                          double tau);

// For g = g_plus - g_minus with both parts convex: keeps g_plus, linearizes
// the concave part -g_minus at the anchor. Majorizes g when the split is
// valid.
FunctionOracle dc_linearize(const FunctionOracle& convex_part,
                            const FunctionOracle& concave_part_negated, const VectorXd& anchor);

VectorXd smooth_update(const VectorXd& current, const VectorXd& target, double gamma);
BlockVector smooth_update(const BlockVector& current, const BlockVector& target, double gamma);

struct SurrogateReport {
  double touching_err = 0.0;
  double gradient_err = 0.0;
  int majorization_violations = 0;
  double worst_violation = 0.0;  // max of (g - G) over violating samples
};

// Checks the anchoring conditions and counts sampled majorization failures
// (G < g - 1e-10). Majorization only matters for constraint surrogates;
// objective surrogates should be compared after subtracting their value
// offset at the anchor.
SurrogateReport verify_surrogate(const FunctionOracle& surrogate, const FunctionOracle& original,
                                 const VectorXd& anchor, const std::vector<VectorXd>& samples);

}  // namespace decomp
