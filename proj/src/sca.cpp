#include "decomp/sca.hpp"

#include <cmath>

namespace decomp {

double outer_step(const StepSchedule& s, int k) {
  if (k <= 0) return s.gamma0;
  return 1.0 / (s.alpha + s.beta * std::pow(static_cast<double>(k), s.epsilon));
}

double inner_step(const InnerStepSchedule& s, int t) {
  double g = s.gamma0;
  for (int i = 1; i <= t; ++i) g = g * (1.0 - s.beta_in * g);
  return g;
}

SurrogateSpec make_surrogate_spec(SurrogateVariant variant, double tau) {
  SurrogateSpec s;
  s.variant = variant;
  s.tau = tau;
  s.strong_convexity = (variant == SurrogateVariant::kTaylorQuadratic) ? tau : 0.0;
  return s;
}

FunctionOracle taylor_quadratic_surrogate(const VectorXd& grad_at_anchor, const VectorXd& anchor,
                                          double tau) {
  FunctionOracle o;
  o.dim = static_cast<int>(anchor.size());
  o.value = [grad_at_anchor, anchor, tau](const VectorXd& y) {
    VectorXd d = y - anchor;
    return 0.5 * tau * d.squaredNorm() + grad_at_anchor.dot(d);
  };
  o.grad = [grad_at_anchor, anchor, tau](const VectorXd& y) -> VectorXd {
    return tau * (y - anchor) + grad_at_anchor;
  };
  return o;
}

FunctionOracle dc_linearize(const FunctionOracle& convex_part,
                            const FunctionOracle& concave_part_negated, const VectorXd& anchor) {
  const double g_minus_at_anchor = concave_part_negated.value(anchor);
  const VectorXd grad_minus_at_anchor = concave_part_negated.grad(anchor);
  FunctionOracle o;
  o.dim = convex_part.dim;
  o.value = [convex_part, g_minus_at_anchor, grad_minus_at_anchor, anchor](const VectorXd& x) {
    return convex_part.value(x) - g_minus_at_anchor - grad_minus_at_anchor.dot(x - anchor);
  };
  o.grad = [convex_part, grad_minus_at_anchor](const VectorXd& x) -> VectorXd {
    return convex_part.grad(x) - grad_minus_at_anchor;
  };
  return o;
}

VectorXd smooth_update(const VectorXd& current, const VectorXd& target, double gamma) {
  return current + gamma * (target - current);
}

BlockVector smooth_update(const BlockVector& current, const BlockVector& target, double gamma) {
  BlockVector out = current;
  for (size_t i = 0; i < out.blocks.size(); ++i)
    out.blocks[i] = current.blocks[i] + gamma * (target.blocks[i] - current.blocks[i]);
  return out;
}

SurrogateReport verify_surrogate(const FunctionOracle& surrogate, const FunctionOracle& original,
                                 const VectorXd& anchor, const std::vector<VectorXd>& samples) {
  SurrogateReport r;
  r.touching_err = std::fabs(surrogate.value(anchor) - original.value(anchor));
  r.gradient_err = (surrogate.grad(anchor) - original.grad(anchor)).norm();
  for (const auto& s : samples) {
    double gap = surrogate.value(s) - original.value(s);
    if (gap < -1e-10) {
      ++r.majorization_violations;
      r.worst_violation = std::max(r.worst_violation, -gap);
    }
  }
  return r;
}

}  // namespace decomp
