#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "bch/error.hpp"

namespace bch::detail {

/// Root of a continuous f with a sign change on [lo, hi], solved to a few ulps.
template <class F>
double bracketed_root(F&& f, double lo, double hi) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream os;
    os << "no sign change on [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::ConvergenceFailure, os.str());
  }
  std::uintmax_t iters = 300;
  auto tol = [](double x, double y) {
    return std::abs(x - y) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                  std::max(std::abs(x), std::abs(y));
  };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  const double fa = f(a);
  const double fb = f(b);
  return std::abs(fa) <= std::abs(fb) ? a : b;
}

}  // namespace bch::detail
