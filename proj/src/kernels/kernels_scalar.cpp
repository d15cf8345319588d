#include <algorithm>
#include <cmath>
#include <limits>

#include "bch/kernels.hpp"

namespace bch::kernels {

namespace {

void momentum_rhs_scalar(double c, double b, const double* m, const double* mx, const double* u,
                         const double* ux, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (c - u[i]) * mx[i] - b * m[i] * ux[i];
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void add_scaled_scalar(const double* x, double alpha, const double* y, double* out,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + alpha * y[i];
}

void rk4_combine_scalar(const double* m, double w, const double* k1, const double* k2,
                        const double* k3, const double* k4, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = m[i] + w * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
}

// Four interleaved partial sums, the same association the vector variant uses.
double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    for (std::size_t l = 0; l < 4; ++l) acc[l] += x[i + l] * y[i + l];
  double s = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_scalar(const double* x, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    for (std::size_t l = 0; l < 4; ++l) acc[l] += x[i + l];
  double s = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  for (; i < n; ++i) s += x[i];
  return s;
}

double min_scalar(const double* x, std::size_t n) {
  double v = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) v = std::min(v, x[i]);
  return v;
}

double max_abs_scalar(const double* x, std::size_t n) {
  double v = 0.0;
  for (std::size_t i = 0; i < n; ++i) v = std::max(v, std::abs(x[i]));
  return v;
}

void scale_complex_scalar(const double* s, double* z, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    z[2 * k] *= s[k];
    z[2 * k + 1] *= s[k];
  }
}

void scale_complex_i_scalar(const double* s, double* z, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double re = z[2 * k];
    const double im = z[2 * k + 1];
    z[2 * k] = -s[k] * im;
    z[2 * k + 1] = s[k] * re;
  }
}

constexpr KernelTable kScalar{
    Isa::Scalar,       momentum_rhs_scalar, axpy_scalar,    add_scaled_scalar,
    rk4_combine_scalar, dot_scalar,         sum_scalar,     min_scalar,
    max_abs_scalar,    scale_complex_scalar, scale_complex_i_scalar,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace bch::kernels
