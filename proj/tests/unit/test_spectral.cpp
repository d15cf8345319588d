#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bch/error.hpp"
#include "bch/spectral.hpp"

using namespace bch;

namespace {

const WaveParameters kRef{2.0, 0.1, 0.09, 1.0};

OperatorCoefficients constant_operator(double p0, double r0, double T, std::size_t N) {
  OperatorCoefficients op;
  op.b = 2.0;
  op.T = T;
  op.N = N;
  op.p.assign(N, p0);
  op.q.assign(N, 0.0);
  op.symmetric_r.assign(N, r0);
  op.r.assign(N, -r0);
  op.p_min = p0;
  return op;
}

std::vector<double> symbol_eigenvalues(double p0, double r0, double T, long M) {
  std::vector<double> out;
  const double kappa = 2.0 * std::numbers::pi / T;
  for (long k = -M; k <= M; ++k) out.push_back(r0 + p0 * kappa * kappa * double(k * k));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("constant-coefficient Hill spectrum equals the symbol") {
  const auto op = constant_operator(0.7, -0.3, 5.0, 128);
  const auto ev = hill_eigenvalues(op, 32);
  const auto ref = symbol_eigenvalues(0.7, -0.3, 5.0, 32);
  REQUIRE(ev.size() == ref.size());
  for (std::size_t i = 0; i < ev.size(); ++i) {
    CHECK(std::abs(ev[i] - ref[i]) <= 1e-10 * std::max(1.0, std::abs(ref[i])));
  }
  CHECK_THROWS_AS(hill_eigenvalues(op, 33), Error);
}

TEST_CASE("equilibrium operator has constant coefficients") {
  const auto scan = critical_points(kRef);
  const auto eq = equilibrium_profile(2.0, 0.1, 1.0, 64, 4.0);
  const auto w = multipliers({2.0, 0.1, scan.V_phi2, 1.0});
  const auto op = assemble_operator(eq, w);
  const double p0 = op.p[0], r0 = op.symmetric_r[0];
  for (std::size_t j = 0; j < op.N; ++j) {
    CHECK(op.p[j] == doctest::Approx(p0).epsilon(1e-14));
    CHECK(op.symmetric_r[j] == doctest::Approx(r0).epsilon(1e-14));
    CHECK(op.q[j] == 0.0);
  }
  const auto ev = hill_eigenvalues(op, 16);
  const auto ref = symbol_eigenvalues(p0, r0, 4.0, 16);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    CHECK(std::abs(ev[i] - ref[i]) <= 1e-10 * std::max(1.0, std::abs(ref[i])));
  }
}

TEST_CASE("operator coefficients at the reference wave") {
  const auto prof = synthesize_profile(kRef, 512);
  const auto op = assemble_operator(prof, multipliers(kRef));
  CHECK(op.p_min > 0.0);
  for (double x : op.p) CHECK(x > 0.0);
  CHECK(op.self_adjoint_gap < 1e-10);
  CHECK(op.printed_q_ratio == doctest::Approx(4.0).epsilon(1e-8));

  const WaveParameters p3{3.0, 0.05, 0.0, 1.0};
  const auto s3 = critical_points(p3);
  const WaveParameters q3{3.0, 0.05, 0.5 * (s3.V_phi1 + s3.V_phi2), 1.0};
  const auto op3 = assemble_operator(synthesize_profile(q3, 256), multipliers(q3));
  CHECK(op3.printed_q_ratio == doctest::Approx(9.0).epsilon(1e-8));
}

TEST_CASE("reference wave has inertia (1,1) and translation kernel") {
  const auto prof = synthesize_profile(kRef, 512);
  const auto op = assemble_operator(prof, multipliers(kRef));
  const auto rep = periodic_spectrum(op, prof);
  CHECK(rep.n_neg == 1);
  CHECK(rep.n_zero == 1);
  CHECK(rep.kernel_residual < 1e-6);
  const double closest = *std::min_element(rep.eigenvalues.begin(), rep.eigenvalues.end(),
                                           [](double x, double y) { return std::abs(x) < std::abs(y); });
  CHECK(std::abs(closest) <= rep.tau);

  SUBCASE("inertia survives grid doubling and mode doubling") {
    const auto fine = synthesize_profile(kRef, 1024);
    const auto opf = assemble_operator(fine, multipliers(kRef));
    const auto repf = periodic_spectrum(opf, fine);
    CHECK(repf.n_neg == rep.n_neg);
    CHECK(repf.n_zero == rep.n_zero);
    SpectrumOptions half;
    half.modes = 64;
    const auto reph = periodic_spectrum(op, prof, half);
    CHECK(reph.n_neg == rep.n_neg);
    CHECK(reph.n_zero == rep.n_zero);
  }
}

TEST_CASE("under-resolved spectrum is reported") {
  // Near the peaked limit N = 64 cannot resolve the crest.
  const WaveParameters p{2.0, 0.02, 0.0, 1.0};
  const auto s = critical_points(p);
  const WaveParameters q{2.0, 0.02, s.V_phi2 + 0.7 * (s.V_phi1 - s.V_phi2), 1.0};
  const auto prof = synthesize_profile(q, 64);
  const auto op = assemble_operator(prof, multipliers(q));
  try {
    periodic_spectrum(op, prof);
    FAIL("expected DiscretizationNotConverged");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DiscretizationNotConverged);
  }
}

TEST_CASE("operator identities from the family derivatives") {
  const auto fam = family_derivatives(kRef, 512);
  const auto op = assemble_operator(fam.base, multipliers(kRef));
  const auto jac = parameter_jacobians(kRef);
  const auto id = proof_identities(fam, op, jac);
  CHECK(id.muE_residual < 1e-4);
  CHECK(id.muc_residual < 1e-4);
  CHECK(id.mua_residual < 1e-4);
  CHECK(id.psi_identity_residual < 1e-3);
  CHECK(id.tangent_max < 1e-6);
  CHECK(id.psi_quadratic_sl == doctest::Approx(id.psi_quadratic / hessian_scale).epsilon(1e-12));
  const double omega2_a = multipliers(kRef).grad_omega2[0];
  CHECK((id.psi_quadratic < 0.0) == (omega2_a * jac.product < 0.0));
}

TEST_CASE("coercivity probe") {
  const auto prof = synthesize_profile(kRef, 512);
  const auto op = assemble_operator(prof, multipliers(kRef));
  const auto rep = periodic_spectrum(op, prof);
  const auto c = coercivity_probe(op, prof, 1000);
  CHECK(c.trials == 1000);
  CHECK(c.min_constrained > 0.0);
  CHECK(c.constrained_min_eigenvalue > 0.0);
  CHECK(c.min_unconstrained < 0.0);
  CHECK(c.negative_unconstrained > 0);
  CHECK(std::abs(c.kernel_quotient) <= rep.tau);
}

TEST_CASE("monodromy coefficient matches the determinant formula") {
  const auto orbit = WaveOrbit::build(kRef);
  const double th = monodromy_theta(orbit, multipliers(kRef));
  const auto jac = parameter_jacobians(kRef);
  CHECK(th == doctest::Approx(jac.theta).epsilon(1e-6));
}

TEST_CASE("quadratic form agrees with the applied operator") {
  const auto prof = synthesize_profile(kRef, 256);
  const auto op = assemble_operator(prof, multipliers(kRef));
  std::vector<double> v(prof.N);
  for (std::size_t j = 0; j < prof.N; ++j) {
    const double x = prof.x[j] * 2.0 * std::numbers::pi / prof.T;
    v[j] = std::cos(x) + 0.3 * std::sin(3.0 * x) + 0.1;
  }
  const auto Lv = apply_operator(op, v);
  double direct = 0.0;
  for (std::size_t j = 0; j < prof.N; ++j) direct += Lv[j] * v[j];
  direct *= prof.T / static_cast<double>(prof.N);
  CHECK(quadratic_form(op, v) == doctest::Approx(direct).epsilon(1e-10));
}
