#pragma once

// Reference computations for the tests. They use only the defining
// integrals and plain bisection, no library code.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

constexpr double kPi = std::numbers::pi;

// (1/2pi) int_0^{2pi} cos(m t) e^{x (cos t - 1)} dt = e^{-x} I_m(x) by the
// trapezoid rule, which converges geometrically for periodic analytic
// integrands.
inline double scaled_moment(int m, double x, int nodes = 10000) {
  double s = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const double t = 2.0 * kPi * j / nodes;
    s += std::cos(m * t) * std::exp(x * (std::cos(t) - 1.0));
  }
  return s / nodes;
}

inline double bessel_i(int m, double x, int nodes = 10000) {
  return scaled_moment(m, x, nodes) * std::exp(x);
}

inline double V(double x) {
  if (x < 0.0) return -V(-x);
  return scaled_moment(1, x) / scaled_moment(0, x);
}

inline double S(double x) { return scaled_moment(2, std::abs(x)) / scaled_moment(0, std::abs(x)); }

// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iterations = 200) {
  double flo = f(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Positive root of r = V(slope r) for slope > 2.
inline double symmetric_level(double slope) {
  return bisect([&](double r) { return V(slope * r) - r; }, 1e-9, 1.0 - 1e-15);
}

}  // namespace oracle
