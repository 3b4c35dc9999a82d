#pragma once

// Independent reference computations used to pin expected test values.
// Everything here is deliberately brute force and shares no code with the
// library paths it checks.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracles {

/// Root of g on [lo, hi] by plain bisection; needs a sign change.
inline double bisect(const std::function<double(double)>& g, double lo, double hi,
                     double tol = 1e-13, int max_iter = 200) {
  double glo = g(lo), ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0)) throw std::runtime_error("bisect: no sign change");
  for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Midpoint-rule quadrature with dyadic refinement until two consecutive
/// levels agree to rel_tol.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-10, int min_level = 10, int max_level = 24) {
  double prev = 0.0;
  for (int level = min_level; level <= max_level; ++level) {
    const std::size_t n = std::size_t{1} << level;
    const double h = (b - a) / static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += f(a + (static_cast<double>(i) + 0.5) * h);
    acc *= h;
    if (level > min_level &&
        std::abs(acc - prev) <= rel_tol * (std::abs(acc) + 1e-300)) {
      return acc;
    }
    prev = acc;
  }
  return prev;
}

/// Centered finite-difference first derivative.
inline double diff(const std::function<double(double)>& f, double t, double h = 1e-6) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

/// Equilibrium of the constant-coefficient model:
/// sum_lambda_r * c^m / (1 + c^n) = b * c, bracketed by [lo, hi].
inline double constant_equilibrium(double sum_lambda_r, double b, double m, double n, double lo,
                                   double hi) {
  return bisect(
      [&](double c) { return sum_lambda_r * std::pow(c, m) / (1.0 + std::pow(c, n)) - b * c; },
      lo, hi);
}

}  // namespace oracles
