#pragma once

// Independent reference oracles for the test suites: dense grid searches and
// finite differences. These deliberately avoid the library's solver paths.

#include <cmath>
#include <functional>
#include <limits>

namespace oracle {

struct Min1D {
  double x = 0.0;
  double value = std::numeric_limits<double>::infinity();
};

// Golden-section refinement inside [lo, hi].
inline Min1D golden(const std::function<double(double)>& f, double lo, double hi) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-14 * (1.0 + std::fabs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  double xm = 0.5 * (a + b), fm = f(xm);
  return {xm, fm};
}

// Dense grid search; `refine` polishes the winning bracket by golden section.
inline Min1D grid_minimize(const std::function<double(double)>& f, double lo, double hi,
                           double step, bool refine = true) {
  Min1D best;
  const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / step)));
  for (int i = 0; i <= n; ++i) {
    double x = lo + (hi - lo) * static_cast<double>(i) / n;
    double v = f(x);
    if (v < best.value) best = {x, v};
  }
  if (refine) {
    double h = (hi - lo) / n;
    Min1D polished = golden(f, std::max(lo, best.x - h), std::min(hi, best.x + h));
    if (polished.value < best.value) best = polished;
  }
  return best;
}

inline double fd_derivative(const std::function<double(double)>& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracle
