#include "decomp/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace decomp {

namespace {
constexpr double kPi = 3.141592653589793238462643;

// Bisection on a bracketing interval [a, b] with f(a)*f(b) <= 0.
double bisect(const std::vector<double>& c, double a, double b) {
  double fa = poly_eval(c, a);
  if (fa == 0.0) return a;
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (a + b);
    double fm = poly_eval(c, m);
    if (fm == 0.0 || (b - a) < 1e-15 * (1.0 + std::fabs(m))) return m;
    if ((fa < 0) == (fm < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}
}  // namespace

double poly_eval(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
  return d;
}

std::vector<double> solve_quadratic(double a, double b, double c) {
  if (a == 0.0) {
    if (b == 0.0) return {};
    return {-c / b};
  }
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  if (disc == 0.0) return {-b / (2.0 * a)};
  // Numerically stable split: compute the larger-magnitude root first.
  double q = -0.5 * (b + (b >= 0 ? std::sqrt(disc) : -std::sqrt(disc)));
  double r1 = q / a;
  double r2 = (q != 0.0) ? c / q : -b / a - r1;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

std::vector<double> solve_cubic(double a, double b, double c, double d) {
  if (a == 0.0) return solve_quadratic(b, c, d);
  // Normalize to x^3 + p2 x^2 + p1 x + p0.
  double p2 = b / a, p1 = c / a, p0 = d / a;
  double q = (p2 * p2 - 3.0 * p1) / 9.0;
  double r = (p2 * (2.0 * p2 * p2 - 9.0 * p1) + 27.0 * p0) / 54.0;
  double r2 = r * r, q3 = q * q * q;
  std::vector<double> roots;
  if (r2 < q3) {
    double t = std::acos(std::clamp(r / std::sqrt(q3), -1.0, 1.0));
    double m = -2.0 * std::sqrt(q);
    roots = {m * std::cos(t / 3.0) - p2 / 3.0,
             m * std::cos((t + 2.0 * kPi) / 3.0) - p2 / 3.0,
             m * std::cos((t - 2.0 * kPi) / 3.0) - p2 / 3.0};
  } else {
    double u = std::cbrt(-r - std::copysign(std::sqrt(r2 - q3), r));
    double v = (u == 0.0) ? 0.0 : q / u;
    roots = {u + v - p2 / 3.0};
    // A double real root appears when the discriminant vanishes.
    double imag = 0.5 * std::sqrt(3.0) * (u - v);
    if (std::fabs(imag) < 1e-12 * (1.0 + std::fabs(u) + std::fabs(v)))
      roots.push_back(-0.5 * (u + v) - p2 / 3.0);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<double> poly_roots_in_interval(const std::vector<double>& c, double lo, double hi) {
  size_t deg = c.size();
  while (deg > 1 && c[deg - 1] == 0.0) --deg;
  --deg;  // actual degree

  std::vector<double> roots;
  if (deg == 0) return roots;
  if (deg <= 3) {
    std::vector<double> all;
    if (deg == 1)
      all = {-c[0] / c[1]};
    else if (deg == 2)
      all = solve_quadratic(c[2], c[1], c[0]);
    else
      all = solve_cubic(c[3], c[2], c[1], c[0]);
    for (double r : all)
      if (r >= lo - 1e-12 && r <= hi + 1e-12) roots.push_back(std::clamp(r, lo, hi));
    return roots;
  }

  // Sign-change scan; 64 points per degree resolves well-separated roots of
  // the low-degree polynomials used here.
  const int n = 64 * static_cast<int>(deg);
  double prev_x = lo, prev_f = poly_eval(c, lo);
  if (prev_f == 0.0) roots.push_back(lo);
  for (int i = 1; i <= n; ++i) {
    double x = lo + (hi - lo) * static_cast<double>(i) / n;
    double f = poly_eval(c, x);
    if (f == 0.0)
      roots.push_back(x);
    else if ((prev_f < 0) != (f < 0))
      roots.push_back(bisect(c, prev_x, x));
    prev_x = x;
    prev_f = f;
  }
  return roots;
}

IntervalMinimum minimize_poly_on_interval(const std::vector<double>& c, double lo, double hi,
                                          double tie_tol) {
  std::vector<double> candidates = poly_roots_in_interval(poly_derivative(c), lo, hi);
  candidates.push_back(lo);
  candidates.push_back(hi);
  IntervalMinimum best{lo, std::numeric_limits<double>::infinity()};
  for (double x : candidates) {
    double v = poly_eval(c, x);
    if (v < best.value - tie_tol || (v <= best.value + tie_tol && x < best.x)) best = {x, v};
  }
  return best;
}

std::vector<double> poly_local_minimizers(const std::vector<double>& c, double lo, double hi) {
  std::vector<double> d = poly_derivative(c);
  std::vector<double> out;
  for (double r : poly_roots_in_interval(d, lo, hi)) {
    double h = 1e-7 * (1.0 + std::fabs(r));
    double left = poly_eval(d, std::max(lo, r - h));
    double right = poly_eval(d, std::min(hi, r + h));
    if (left <= 0.0 && right >= 0.0) out.push_back(r);
  }
  if (poly_eval(d, lo) > 0.0) out.push_back(lo);
  if (poly_eval(d, hi) < 0.0) out.push_back(hi);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace decomp
