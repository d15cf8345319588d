#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bch/kernels.hpp"

using namespace bch::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double lo = -1.0,
                                  double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

double max_rel_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(a[i])));
  }
  return m;
}

}  // namespace

TEST_CASE("runtime dispatch picks a table") {
  const KernelTable& t = active();
  CHECK(t.momentum_rhs != nullptr);
  if (detect_isa() == Isa::Avx2 && avx2_table() != nullptr) CHECK(t.isa == Isa::Avx2);
  CHECK(scalar_table().isa == Isa::Scalar);
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  const KernelTable* v = avx2_table();
  if (v == nullptr || detect_isa() != Isa::Avx2) {
    MESSAGE("AVX2 not available; equivalence skipped");
    return;
  }
  const KernelTable& s = scalar_table();
  std::mt19937_64 rng(99);
  // Odd sizes exercise the remainder loops.
  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 513u, 1000u}) {
    const auto m = random_vector(n, rng, 0.1, 2.0), mx = random_vector(n, rng),
               u = random_vector(n, rng), ux = random_vector(n, rng);
    std::vector<double> o1(n), o2(n);
    s.momentum_rhs(1.1, 2.5, m.data(), mx.data(), u.data(), ux.data(), o1.data(), n);
    v->momentum_rhs(1.1, 2.5, m.data(), mx.data(), u.data(), ux.data(), o2.data(), n);
    CHECK(max_rel_gap(o1, o2) < 1e-15);

    auto y1 = u, y2 = u;
    s.axpy(0.37, m.data(), y1.data(), n);
    v->axpy(0.37, m.data(), y2.data(), n);
    CHECK(max_rel_gap(y1, y2) < 1e-15);

    s.add_scaled(m.data(), -0.5, u.data(), o1.data(), n);
    v->add_scaled(m.data(), -0.5, u.data(), o2.data(), n);
    CHECK(max_rel_gap(o1, o2) < 1e-15);

    s.rk4_combine(m.data(), 0.01, mx.data(), u.data(), ux.data(), m.data(), o1.data(), n);
    v->rk4_combine(m.data(), 0.01, mx.data(), u.data(), ux.data(), m.data(), o2.data(), n);
    CHECK(max_rel_gap(o1, o2) < 1e-15);

    const double scale = static_cast<double>(n);
    CHECK(std::abs(s.dot(m.data(), u.data(), n) - v->dot(m.data(), u.data(), n)) < 1e-14 * scale);
    CHECK(std::abs(s.sum(u.data(), n) - v->sum(u.data(), n)) < 1e-14 * scale);
    CHECK(s.min_value(u.data(), n) == v->min_value(u.data(), n));
    CHECK(s.max_abs(u.data(), n) == v->max_abs(u.data(), n));

    const std::size_t nc = n;  // complex entries
    const auto sym = random_vector(nc, rng);
    auto z1 = random_vector(2 * nc, rng), z2 = z1;
    s.scale_complex(sym.data(), z1.data(), nc);
    v->scale_complex(sym.data(), z2.data(), nc);
    CHECK(max_rel_gap(z1, z2) == 0.0);
    s.scale_complex_i(sym.data(), z1.data(), nc);
    v->scale_complex_i(sym.data(), z2.data(), nc);
    CHECK(max_rel_gap(z1, z2) == 0.0);
  }
}

TEST_CASE("span wrappers use the active table") {
  std::vector<double> x{1.0, -3.0, 2.0}, y{0.5, 0.5, 0.5};
  CHECK(dot(x, y) == doctest::Approx(0.0));
  CHECK(sum(x) == doctest::Approx(0.0));
  CHECK(min_value(x) == -3.0);
  CHECK(max_abs(x) == 3.0);
  axpy(2.0, x, y);
  CHECK(y[1] == doctest::Approx(-5.5));
}
