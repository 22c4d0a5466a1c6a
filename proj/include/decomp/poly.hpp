#pragma once

#include <vector>

namespace decomp {

// Dense univariate polynomial utilities, coefficients in ascending order
// (c[0] + c[1]x + ...). Root solvers return only real roots.

double poly_eval(const std::vector<double>& c, double x);
std::vector<double> poly_derivative(const std::vector<double>& c);

// a*x^2 + b*x + c = 0. Degenerate (a==0) handled as linear.
std::vector<double> solve_quadratic(double a, double b, double c);

// a*x^3 + b*x^2 + c*x + d = 0, trigonometric/Cardano split.
// Degenerate leading coefficients fall through to the quadratic solver.
std::vector<double> solve_cubic(double a, double b, double c, double d);

// Real roots of an arbitrary-degree polynomial inside [lo, hi]. Degrees up
// to 3 use the closed forms above; higher degrees isolate sign changes of
// the polynomial on a scan grid and bisect each bracket.
std::vector<double> poly_roots_in_interval(const std::vector<double>& c, double lo, double hi);

struct IntervalMinimum {
  double x = 0.0;
  double value = 0.0;
};

// Global minimum of a polynomial on [lo, hi] via derivative roots plus the
// endpoints. Ties (within tie_tol on the value) break toward smaller x.
IntervalMinimum minimize_poly_on_interval(const std::vector<double>& c, double lo, double hi,
                                          double tie_tol = 1e-12);

// Local minimizers of the polynomial on [lo, hi]: interior derivative roots
// where the derivative changes sign - to +, plus endpoints whose one-sided
// slope points into the interval.
std::vector<double> poly_local_minimizers(const std::vector<double>& c, double lo, double hi);

}  // namespace decomp
