#pragma once

// Data-parallel inner loops used by the quadratures and the time stepper.
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant; the variant is chosen once at runtime from CPUID.
// Setting BCH_FORCE_SCALAR=1 in the environment pins the scalar table.

#include <cstddef>
#include <span>
#include <string_view>

namespace bch::kernels {

enum class Isa { Scalar, Avx2 };

constexpr std::string_view to_string(Isa isa) noexcept {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

struct KernelTable {
  Isa isa;
  /// out = c*mx - u*mx - b*m*ux   (frame-shifted momentum flux)
  void (*momentum_rhs)(double c, double b, const double* m, const double* mx, const double* u,
                       const double* ux, double* out, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// out = x + alpha * y
  void (*add_scaled)(const double* x, double alpha, const double* y, double* out, std::size_t n);
  /// out = m + w * (k1 + 2 k2 + 2 k3 + k4)
  void (*rk4_combine)(const double* m, double w, const double* k1, const double* k2,
                      const double* k3, const double* k4, double* out, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*min_value)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  /// Interleaved complex data z[k] *= s[k] (real symbol), n complex entries.
  void (*scale_complex)(const double* symbol, double* z, std::size_t n);
  /// Interleaved complex data z[k] *= i * s[k], n complex entries.
  void (*scale_complex_i)(const double* symbol, double* z, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table() noexcept;
Isa detect_isa() noexcept;
/// The table selected for this process.
const KernelTable& active() noexcept;

// Span conveniences over the active table.
void momentum_rhs(double c, double b, std::span<const double> m, std::span<const double> mx,
                  std::span<const double> u, std::span<const double> ux, std::span<double> out);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> x, std::span<const double> y);
double sum(std::span<const double> x);
double min_value(std::span<const double> x);
double max_abs(std::span<const double> x);

}  // namespace bch::kernels
