#include "bch/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "bch/kernels.hpp"

namespace bch {

namespace {
// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Plans {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  explicit Plans(std::size_t n) {
    std::lock_guard lock(planner_mutex());
    real = fftw_alloc_real(n);
    spec = fftw_alloc_complex(n / 2 + 1);
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, spec, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real, FFTW_ESTIMATE);
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(real);
    fftw_free(spec);
  }
};

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n < 2) throw std::invalid_argument("RealFft: length must be at least 2");
  plans_ = std::make_unique<Plans>(n);
}

RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

void RealFft::forward(std::span<const double> x, std::span<cplx> X) {
  std::copy(x.begin(), x.end(), plans_->real);
  fftw_execute(plans_->fwd);
  const auto* s = reinterpret_cast<const cplx*>(plans_->spec);
  std::copy(s, s + spectrum_size(), X.begin());
}

void RealFft::inverse(std::span<const cplx> X, std::span<double> x) {
  auto* s = reinterpret_cast<cplx*>(plans_->spec);
  std::copy(X.begin(), X.begin() + static_cast<std::ptrdiff_t>(spectrum_size()), s);
  fftw_execute(plans_->inv);
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t j = 0; j < n_; ++j) x[j] = plans_->real[j] * scale;
}

std::vector<double> wavenumbers(std::size_t n, double period) {
  std::vector<double> k(n / 2 + 1);
  const double k0 = 2.0 * std::numbers::pi / period;
  for (std::size_t j = 0; j < k.size(); ++j) k[j] = k0 * static_cast<double>(j);
  return k;
}

std::vector<double> spectral_derivative(std::span<const double> samples, double period,
                                        int order) {
  const std::size_t n = samples.size();
  RealFft fft(n);
  std::vector<cplx> X(fft.spectrum_size());
  fft.forward(samples, X);
  const auto k = wavenumbers(n, period);
  for (std::size_t j = 0; j < X.size(); ++j) {
    cplx factor = std::pow(cplx(0.0, k[j]), order);
    if (order % 2 != 0 && n % 2 == 0 && j == n / 2) factor = 0.0;
    X[j] *= factor;
  }
  std::vector<double> out(n);
  fft.inverse(X, out);
  return out;
}

std::vector<double> periodic_shift(std::span<const double> samples, double period,
                                   double shift) {
  const std::size_t n = samples.size();
  RealFft fft(n);
  std::vector<cplx> X(fft.spectrum_size());
  fft.forward(samples, X);
  const auto k = wavenumbers(n, period);
  for (std::size_t j = 0; j < X.size(); ++j) {
    X[j] *= std::polar(1.0, -k[j] * shift);
    // keep the Nyquist mode real so the shift stays a real operation
    if (n % 2 == 0 && j == n / 2) X[j] = X[j].real();
  }
  std::vector<double> out(n);
  fft.inverse(X, out);
  return out;
}

double periodic_integral(std::span<const double> samples, double period) {
  return period * kernels::sum(samples) / static_cast<double>(samples.size());
}

std::vector<cplx> fourier_coefficients(std::span<const double> samples) {
  const std::size_t n = samples.size();
  RealFft fft(n);
  std::vector<cplx> X(fft.spectrum_size());
  fft.forward(samples, X);
  for (auto& v : X) v /= static_cast<double>(n);
  return X;
}

double trig_interpolate(std::span<const cplx> coeffs, std::size_t n, double period, double x) {
  const double k0 = 2.0 * std::numbers::pi / period;
  double s = coeffs[0].real();
  const std::size_t half = n / 2;
  for (std::size_t j = 1; j < coeffs.size(); ++j) {
    const double w = (n % 2 == 0 && j == half) ? 1.0 : 2.0;
    const double arg = k0 * static_cast<double>(j) * x;
    s += w * (coeffs[j].real() * std::cos(arg) - coeffs[j].imag() * std::sin(arg));
  }
  return s;
}

}  // namespace bch
