#pragma once

// Central differences with one Richardson step. Used for every parameter
// derivative along the wave family.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace bch {

struct FdEstimate {
  double value = 0.0;  ///< Richardson-extrapolated derivative
  double coarse = 0.0; ///< plain central difference at step h/2
  double error = 0.0;  ///< |value - coarse|
};

/// f(t) is evaluated at t = +-h and t = +-h/2.
template <class F>
FdEstimate richardson(F&& f, double h) {
  const double d1 = (f(h) - f(-h)) / (2.0 * h);
  const double d2 = (f(0.5 * h) - f(-0.5 * h)) / h;
  FdEstimate e;
  e.value = (4.0 * d2 - d1) / 3.0;
  e.coarse = d2;
  e.error = std::abs(e.value - d2);
  return e;
}

/// Vector-valued variant: f(t) returns std::vector<double> of fixed length.
struct FdVectorEstimate {
  std::vector<double> value;
  std::vector<double> coarse;
  double max_error = 0.0;
  double max_value = 0.0;
};

template <class F>
FdVectorEstimate richardson_vector(F&& f, double h) {
  const std::vector<double> p1 = f(h);
  const std::vector<double> m1 = f(-h);
  const std::vector<double> p2 = f(0.5 * h);
  const std::vector<double> m2 = f(-0.5 * h);
  FdVectorEstimate e;
  const std::size_t n = p1.size();
  e.value.resize(n);
  e.coarse.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d1 = (p1[i] - m1[i]) / (2.0 * h);
    const double d2 = (p2[i] - m2[i]) / h;
    e.value[i] = (4.0 * d2 - d1) / 3.0;
    e.coarse[i] = d2;
    e.max_error = std::max(e.max_error, std::abs(e.value[i] - d2));
    e.max_value = std::max(e.max_value, std::abs(e.value[i]));
  }
  return e;
}

}  // namespace bch
