#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bch/error.hpp"
#include "bch/fourier.hpp"
#include "bch/profile.hpp"
#include "oracles.hpp"

using namespace bch;

namespace {

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

const WaveParameters kRef{2.0, 0.1, 0.09, 1.0};

}  // namespace

TEST_CASE("turning points bracket the well") {
  const auto tp = turning_points(kRef);
  const auto ref = oracle::turning({2.0, 0.1, 0.09, 1.0});
  CHECK(tp.phi_min == doctest::Approx(ref.lo).epsilon(1e-12));
  CHECK(tp.phi_max == doctest::Approx(ref.hi).epsilon(1e-12));
  CHECK(std::abs(tp.phi_min - 0.372) < 2e-3);
  CHECK(std::abs(tp.phi_max - 0.704) < 2e-3);

  const auto scan = critical_points(kRef);
  const auto near_bottom = turning_points({2.0, 0.1, scan.V_phi2 + 1e-9, 1.0});
  CHECK(std::abs(near_bottom.phi_min - scan.phi2) < 1e-3);
  CHECK(std::abs(near_bottom.phi_max - scan.phi2) < 1e-3);
  const auto near_saddle = turning_points({2.0, 0.1, scan.V_phi1 - 1e-9, 1.0});
  CHECK(std::abs(near_saddle.phi_min - scan.phi1) < 1e-3);
}

TEST_CASE("period matches the shooting oracle") {
  const double T = period(kRef);
  const double Tref = oracle::period_by_shooting({2.0, 0.1, 0.09, 1.0});
  CHECK(std::abs(T - Tref) / Tref < 1e-6);
}

TEST_CASE("period near the well bottom approaches the harmonic period") {
  const auto scan = critical_points(kRef);
  const double T = period({2.0, 0.1, scan.V_phi2 + 1e-8, 1.0});
  const double v2 = -1.0 + 2.0 * 0.1 / std::pow(1.0 - scan.phi2, 3.0);
  // 2 pi / sqrt(V"(phi2)) = 4.62295...
  CHECK(T == doctest::Approx(2.0 * std::numbers::pi / std::sqrt(v2)).epsilon(1e-5));
  CHECK(harmonic_period(2.0, 0.1, 1.0) == doctest::Approx(T).epsilon(1e-6));
}

TEST_CASE("period diverges towards the saddle") {
  const auto scan = critical_points(kRef);
  const double width = scan.V_phi1 - scan.V_phi2;
  double prev = 0.0;
  for (double d : {1e-3, 1e-4, 1e-5, 1e-6}) {
    const double T = period({2.0, 0.1, scan.V_phi1 - d * width, 1.0});
    CHECK(T > prev);
    prev = T;
  }
}

TEST_CASE("period is continuous in E") {
  const double T0 = period(kRef);
  double prev = std::numeric_limits<double>::infinity();
  for (double h : {1e-4, 1e-5, 1e-6, 1e-7}) {
    const double d = std::abs(period({2.0, 0.1, 0.09 + h, 1.0}) - T0);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("synthesized profile satisfies the defining relations") {
  const auto prof = synthesize_profile(kRef, 512);
  REQUIRE(prof.N == 512);
  std::vector<double> ode(prof.N), fint(prof.N);
  for (std::size_t j = 0; j < prof.N; ++j) {
    const double phi = prof.phi[j];
    ode[j] = phi - prof.d2phi[j] - 0.1 / std::pow(1.0 - phi, 2.0);
    fint[j] = (1.0 - phi) * (phi - prof.d2phi[j]) + 0.5 * (prof.dphi[j] * prof.dphi[j] - phi * phi) -
              0.09;
  }
  CHECK(sup_abs(ode) < 1e-8);
  CHECK(sup_abs(fint) < 1e-8);
  const auto r = profile_residuals(prof);
  CHECK(r.energy < 1e-8);
  CHECK(r.first_integral < 1e-8);
  CHECK(r.mu_relation < 1e-8);
  CHECK(r.third_order_ode < 1e-6);

  CHECK(std::abs(prof.dphi[0]) < 1e-10);
  CHECK(std::abs(prof.dphi[prof.N / 2]) < 1e-10);
  CHECK(prof.d2phi[0] < 0.0);
  CHECK(prof.phi[0] == doctest::Approx(prof.phi_max).epsilon(1e-14));
  CHECK(*std::min_element(prof.mu.begin(), prof.mu.end()) > 0.0);
}

TEST_CASE("mu-relation residual falls with N until the floor") {
  const WaveParameters p{2.5, 0.1, 0.0, 1.0};
  const auto scan = critical_points(p);
  const WaveParameters q{2.5, 0.1, scan.V_phi2 + 0.7 * (scan.V_phi1 - scan.V_phi2), 1.0};
  double prev = profile_residuals(synthesize_profile(q, 64)).mu_relation;
  for (std::size_t N : {128u, 256u}) {
    const double r = profile_residuals(synthesize_profile(q, N)).mu_relation;
    CHECK((r <= prev / 4.0 || r < 1e-10));
    prev = r;
  }
}

TEST_CASE("profile residuals detect a corrupted grid point") {
  auto prof = synthesize_profile(kRef, 256);
  prof.phi[37] += 1e-3;
  CHECK(profile_residuals(prof).mu_relation >= 1e-4);
}

TEST_CASE("near-equilibrium profile is a small cosine") {
  const auto scan = critical_points(kRef);
  const double dE = 1e-10;
  const auto prof = synthesize_profile({2.0, 0.1, scan.V_phi2 + dE, 1.0}, 256);
  double amp = 0.0;
  for (double x : prof.phi) amp = std::max(amp, std::abs(x - scan.phi2));
  const double v2 = -1.0 + 2.0 * 0.1 / std::pow(1.0 - scan.phi2, 3.0);
  CHECK(amp <= 2e-5);
  CHECK(amp == doctest::Approx(std::sqrt(2.0 * dE / v2)).epsilon(1e-2));
}

TEST_CASE("equilibrium profile has vanishing residuals") {
  const auto scan = critical_points(kRef);
  const auto prof = equilibrium_profile(2.0, 0.1, 1.0, 128, 5.0);
  for (double x : prof.phi) CHECK(x == scan.phi2);
  const auto r = profile_residuals(prof);
  CHECK(r.energy < 1e-12);
  CHECK(r.first_integral < 1e-12);
  CHECK(r.mu_relation < 1e-12);
  CHECK(r.third_order_ode < 1e-12);
}

TEST_CASE("profile input validation") {
  CHECK_THROWS_AS(synthesize_profile(kRef, 100), Error);
  CHECK_THROWS_AS(synthesize_profile({2.0, 0.2, 0.09, 1.0}, 256), Error);
  try {
    synthesize_profile({2.0, 0.2, 0.09, 1.0}, 256);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotInExistenceSet);
  }
}
