#include <cstdlib>
#include <cstring>

#include "bch/kernels.hpp"

namespace bch::kernels {

#if defined(BCH_HAVE_AVX2_KERNELS)
namespace avx2 {
const KernelTable& table() noexcept;
}
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(BCH_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool scalar_forced() noexcept {
  const char* env = std::getenv("BCH_FORCE_SCALAR");
  return env != nullptr && std::strcmp(env, "") != 0 && std::strcmp(env, "0") != 0;
}

}  // namespace

const KernelTable* avx2_table() noexcept {
#if defined(BCH_HAVE_AVX2_KERNELS)
  static const bool ok = cpu_has_avx2();
  return ok ? &avx2::table() : nullptr;
#else
  return nullptr;
#endif
}

Isa detect_isa() noexcept { return avx2_table() != nullptr ? Isa::Avx2 : Isa::Scalar; }

const KernelTable& active() noexcept {
  static const KernelTable& chosen = []() -> const KernelTable& {
    if (!scalar_forced()) {
      if (const KernelTable* t = avx2_table()) return *t;
    }
    return scalar_table();
  }();
  return chosen;
}

void momentum_rhs(double c, double b, std::span<const double> m, std::span<const double> mx,
                  std::span<const double> u, std::span<const double> ux, std::span<double> out) {
  active().momentum_rhs(c, b, m.data(), mx.data(), u.data(), ux.data(), out.data(), out.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), y.size());
}

double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }

double min_value(std::span<const double> x) { return active().min_value(x.data(), x.size()); }

double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }

}  // namespace bch::kernels
