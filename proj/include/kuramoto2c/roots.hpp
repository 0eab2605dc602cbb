#pragma once

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <utility>

#include "kuramoto2c/errors.hpp"

namespace kuramoto2c::detail {

// Root of f on [lo, hi] given f(lo) and f(hi) of opposite sign. Returns the
// bracket endpoint with the smaller |f| once the bracket has collapsed to
// a few ulps.
template <class F>
double bracketed_root(F&& f, double lo, double hi, double f_lo, double f_hi,
                      const char* what) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0) || !std::isfinite(f_lo) || !std::isfinite(f_hi)) {
    std::ostringstream os;
    os << what << ": root not bracketed on [" << lo << ", " << hi << "], f = (" << f_lo
       << ", " << f_hi << ")";
    throw NumericalError(os.str());
  }
  std::uintmax_t max_iter = 300;
  const auto tol = boost::math::tools::eps_tolerance<double>(52);
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, max_iter);
  const double fa = f(a);
  const double fb = f(b);
  return std::abs(fa) <= std::abs(fb) ? a : b;
}

}  // namespace kuramoto2c::detail
