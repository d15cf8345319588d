#pragma once

// Thin FFTW wrapper plus the spectral calculus used on uniform periodic grids.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace bch {

using cplx = std::complex<double>;

/// Real <-> half-complex transform of fixed length n. Forward is
/// unnormalized (X_k = sum_j x_j e^{-2 pi i jk/n}); inverse divides by n.
/// Instances own their plans and scratch, so share one per thread, not across
/// threads.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  void forward(std::span<const double> x, std::span<cplx> X);
  void inverse(std::span<const cplx> X, std::span<double> x);

 private:
  struct Plans;
  std::size_t n_ = 0;
  std::unique_ptr<Plans> plans_;
};

/// Angular wavenumbers 2 pi j / period for j = 0..n/2.
std::vector<double> wavenumbers(std::size_t n, double period);

/// d^order/dx^order of periodic samples on [0, period). The Nyquist mode is
/// dropped for odd orders.
std::vector<double> spectral_derivative(std::span<const double> samples, double period,
                                        int order = 1);

/// Trapezoid rule on the uniform periodic grid (spectrally accurate for
/// smooth periodic integrands).
double periodic_integral(std::span<const double> samples, double period);

/// Normalized coefficients c_k = X_k / n, k = 0..n/2.
std::vector<cplx> fourier_coefficients(std::span<const double> samples);

/// Evaluates the trigonometric interpolant built from fourier_coefficients at x.
double trig_interpolate(std::span<const cplx> coeffs, std::size_t n, double period, double x);

/// Samples of f(x - shift) for the trigonometric interpolant f of the input.
std::vector<double> periodic_shift(std::span<const double> samples, double period, double shift);

/// True if n is a power of two and at least min_n.
constexpr bool is_power_of_two(std::size_t n, std::size_t min_n = 1) noexcept {
  return n >= min_n && (n & (n - 1)) == 0;
}

}  // namespace bch
