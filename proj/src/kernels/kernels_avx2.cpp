// Compiled with -mavx2 -mfma; only reached after a CPUID check.
#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "bch/kernels.hpp"

namespace bch::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  // (v0 + v2) + (v1 + v3), matching the scalar reduction order
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

void momentum_rhs(double c, double b, const double* m, const double* mx, const double* u,
                  const double* ux, double* out, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d adv = _mm256_mul_pd(_mm256_sub_pd(vc, _mm256_loadu_pd(u + i)),
                                      _mm256_loadu_pd(mx + i));
    const __m256d stretch =
        _mm256_mul_pd(_mm256_mul_pd(vb, _mm256_loadu_pd(m + i)), _mm256_loadu_pd(ux + i));
    _mm256_storeu_pd(out + i, _mm256_sub_pd(adv, stretch));
  }
  for (; i < n; ++i) out[i] = (c - u[i]) * mx[i] - b * m[i] * ux[i];
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void add_scaled(const double* x, double alpha, const double* y, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i,
                     _mm256_fmadd_pd(va, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = x[i] + alpha * y[i];
}

void rk4_combine(const double* m, double w, const double* k1, const double* k2, const double* k3,
                 const double* k4, double* out, std::size_t n) {
  const __m256d vw = _mm256_set1_pd(w);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mid = _mm256_add_pd(_mm256_loadu_pd(k2 + i), _mm256_loadu_pd(k3 + i));
    const __m256d ends = _mm256_add_pd(_mm256_loadu_pd(k1 + i), _mm256_loadu_pd(k4 + i));
    const __m256d acc = _mm256_fmadd_pd(two, mid, ends);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vw, acc, _mm256_loadu_pd(m + i)));
  }
  for (; i < n; ++i) out[i] = m[i] + w * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double min_value(const double* x, std::size_t n) {
  __m256d acc = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double v = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
  for (; i < n; ++i) v = std::min(v, x[i]);
  return v;
}

double max_abs(const double* x, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double v = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) v = std::max(v, std::abs(x[i]));
  return v;
}

// Two complex values per register: [re0 im0 re1 im1].
void scale_complex(const double* s, double* z, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d sv = _mm256_setr_pd(s[k], s[k], s[k + 1], s[k + 1]);
    _mm256_storeu_pd(z + 2 * k, _mm256_mul_pd(sv, _mm256_loadu_pd(z + 2 * k)));
  }
  for (; k < n; ++k) {
    z[2 * k] *= s[k];
    z[2 * k + 1] *= s[k];
  }
}

void scale_complex_i(const double* s, double* z, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d sv = _mm256_setr_pd(-s[k], s[k], -s[k + 1], s[k + 1]);
    const __m256d swapped = _mm256_permute_pd(_mm256_loadu_pd(z + 2 * k), 0b0101);
    _mm256_storeu_pd(z + 2 * k, _mm256_mul_pd(sv, swapped));
  }
  for (; k < n; ++k) {
    const double re = z[2 * k];
    const double im = z[2 * k + 1];
    z[2 * k] = -s[k] * im;
    z[2 * k + 1] = s[k] * re;
  }
}

constexpr KernelTable kAvx2{
    Isa::Avx2, momentum_rhs, axpy,    add_scaled, rk4_combine,   dot,
    sum,       min_value,    max_abs, scale_complex, scale_complex_i,
};

}  // namespace

const KernelTable& table() noexcept { return kAvx2; }

}  // namespace bch::kernels::avx2
