#include "bch/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bch/error.hpp"
#include "bch/fd.hpp"
#include "bch/fourier.hpp"

namespace bch {

namespace {

constexpr double kRouteFail = 1e-5;
// Relative roundoff of one period-integral evaluation, used as a floor for
// the FD error estimates.
constexpr double kEvalNoise = 1e-13;

WaveParameters shifted(const WaveParameters& p, int idx, double t) {
  WaveParameters q = p;
  switch (idx) {
    case 0: q.a += t; break;
    case 1: q.E += t; break;
    default: q.c += t; break;
  }
  return q;
}

double det2(double a11, double a12, double a21, double a22) { return a11 * a22 - a12 * a21; }

double det3(const Gradient& r0, const Gradient& r1, const Gradient& r2) {
  return r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0]) +
         r0[2] * (r1[0] * r2[1] - r1[1] * r2[0]);
}

// First-order error propagation through a 3x3 determinant (cofactor weights).
double det3_error(const Gradient& r0, const Gradient& r1, const Gradient& r2, const Gradient& e0,
                  const Gradient& e1, const Gradient& e2) {
  const std::array<Gradient, 3> m{r0, r1, r2};
  const std::array<Gradient, 3> e{e0, e1, e2};
  double err = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const int i1 = (i + 1) % 3, i2 = (i + 2) % 3, j1 = (j + 1) % 3, j2 = (j + 2) % 3;
      const double cof = m[i1][j1] * m[i2][j2] - m[i1][j2] * m[i2][j1];
      err += std::abs(cof) * e[i][j];
    }
  }
  return err;
}

// Every stencil point must be inside the existence set with a buildable orbit.
void check_stencil(const WaveParameters& p, const Gradient& h) {
  for (int idx = 0; idx < 3; ++idx) {
    for (double t : {-h[idx], h[idx]}) {
      const WaveParameters q = shifted(p, idx, t);
      const ExistenceResult ex = existence_check(q);
      if (!ex.admissible || ex.scan->margin < 1e-12 * std::max(1.0, std::abs(q.E))) {
        std::ostringstream os;
        os.precision(17);
        os << "finite-difference stencil leaves the existence set at (a, E, c) = (" << q.a << ", "
           << q.E << ", " << q.c << ")";
        throw Error(ErrorKind::MarginTooSmall, os.str());
      }
    }
  }
}

PotentialScan checked_scan(const WaveParameters& p, const FdConfig& cfg) {
  const ExistenceResult ex = existence_check(p);
  if (!ex.admissible) throw Error(ErrorKind::NotInExistenceSet, ex.reason);
  if (ex.scan->margin < cfg.min_margin) {
    std::ostringstream os;
    os << "margin " << ex.scan->margin << " to the existence boundary is below " << cfg.min_margin;
    throw Error(ErrorKind::MarginTooSmall, os.str());
  }
  return *ex.scan;
}

}  // namespace

std::string_view to_string(Classification c) noexcept {
  switch (c) {
    case Classification::StableCriteriaMet: return "StableCriteriaMet";
    case Classification::TrichotomyCase_ii: return "TrichotomyCase_ii";
    case Classification::TwoNegativeDirections: return "TwoNegativeDirections";
    case Classification::ProductSignFail: return "ProductSignFail";
    case Classification::Indeterminate: return "Indeterminate";
    case Classification::OutOfScope: return "OutOfScope";
  }
  return "Unknown";
}

Multipliers multipliers(const WaveParameters& p) {
  if (!(p.a > 0.0) || !(p.b > 1.0) || !std::isfinite(p.E) || !std::isfinite(p.c)) {
    throw Error(ErrorKind::Domain, "multipliers require a > 0, b > 1 and finite E, c");
  }
  const double b = p.b;
  const double a_inv_b = std::pow(p.a, 1.0 / b);
  const double num = 2.0 * (b - 1.0) * p.E + (b - 1.0) * p.c * p.c;
  Multipliers m;
  m.omega1 = num / (2.0 * a_inv_b);
  m.omega2 = 0.5 * a_inv_b * (b - 1.0);
  m.grad_omega1 = {-num / (2.0 * b * a_inv_b * p.a), (b - 1.0) / a_inv_b,
                   p.c * (b - 1.0) / a_inv_b};
  m.grad_omega2 = {(b - 1.0) * a_inv_b / (2.0 * b * p.a), 0.0, 0.0};
  return m;
}

double F1_density(double b, double m) { return std::pow(m, 1.0 / b); }

double F2_density(double b, double m, double mx) {
  const double r = mx / (b * m);
  return (r * r + 1.0) * std::pow(m, -1.0 / b);
}

double dF1_dm(double b, double m) { return std::pow(m, 1.0 / b - 1.0) / b; }

double dF2_dm(double b, double m, double mx, double mxx) {
  const double r = mx / (b * m);
  return std::pow(m, -1.0 / b - 1.0) / b *
         ((2.0 * b + 1.0) * r * r - 2.0 * mxx / (b * m) - 1.0);
}

OrbitInvariants orbit_invariants(const WaveOrbit& orbit) {
  const double b = orbit.params().b;
  OrbitInvariants out;
  out.T = orbit.period();
  out.F1 = orbit.integrate([b](const OrbitPoint& q) { return F1_density(b, q.mu); });
  out.F2 = orbit.integrate([b](const OrbitPoint& q) { return F2_density(b, q.mu, q.dmu); });
  out.mass = orbit.integrate([](const OrbitPoint& q) { return q.mu; });
  return out;
}

ConservedQuantities conserved_quantities(const WaveProfile& prof) {
  const double b = prof.params.b;
  std::vector<double> f1(prof.N), f2(prof.N);
  for (std::size_t j = 0; j < prof.N; ++j) {
    f1[j] = F1_density(b, prof.mu[j]);
    f2[j] = F2_density(b, prof.mu[j], prof.dmu[j]);
  }
  ConservedQuantities q;
  q.F1_grid = periodic_integral(f1, prof.T);
  q.F2_grid = periodic_integral(f2, prof.T);

  if (prof.phi_max > prof.phi_min) {
    const OrbitInvariants inv = orbit_invariants(WaveOrbit::build(prof.params));
    q.F1 = inv.F1;
    q.F2 = inv.F2;
  } else {
    // constant state: both routes coincide
    q.F1 = q.F1_grid;
    q.F2 = q.F2_grid;
  }
  q.max_rel_route_gap = std::max(std::abs(q.F1 - q.F1_grid) / std::abs(q.F1),
                                 std::abs(q.F2 - q.F2_grid) / std::abs(q.F2));
  if (q.max_rel_route_gap > kRouteFail) {
    std::ostringstream os;
    os << "grid and orbit quadratures of F1, F2 differ by " << q.max_rel_route_gap
       << " (relative); refine N";
    throw Error(ErrorKind::RouteMismatch, os.str());
  }
  return q;
}

double euler_lagrange_residual(const WaveProfile& prof, const Multipliers& w) {
  const double b = prof.params.b;
  double sup = 0.0;
  for (std::size_t j = 0; j < prof.N; ++j) {
    const double m = prof.mu[j];
    const double r = 1.0 - w.omega1 * dF1_dm(b, m) - w.omega2 * dF2_dm(b, m, prof.dmu[j], prof.d2mu[j]);
    sup = std::max(sup, std::abs(r));
  }
  return sup;
}

Gradient fd_steps(const WaveParameters& p, const PotentialScan& s, const FdConfig& cfg) {
  const double cap = s.margin / cfg.margin_divisor;
  return {std::min(cfg.rel_step * p.a, cap),
          std::min(cfg.rel_step * std::abs(s.V_phi1 - s.V_phi2), cap),
          std::min(cfg.rel_step * p.c, cap)};
}

Classification classify(double J_T_omega1, double err_T_omega1, double product,
                        double err_product, bool fd_reliable) {
  if (!std::isfinite(J_T_omega1) || !std::isfinite(product)) return Classification::Indeterminate;
  if (std::abs(J_T_omega1) <= err_T_omega1) return Classification::TrichotomyCase_ii;
  if (J_T_omega1 < 0.0) return Classification::TwoNegativeDirections;
  if (!fd_reliable || std::abs(product) <= err_product) return Classification::Indeterminate;
  return product > 0.0 ? Classification::StableCriteriaMet : Classification::ProductSignFail;
}

JacobianReport parameter_jacobians(const WaveParameters& p, const FdConfig& cfg) {
  const PotentialScan scan = checked_scan(p, cfg);
  const Gradient h = fd_steps(p, scan, cfg);
  check_stencil(p, h);

  const WaveOrbit base = WaveOrbit::build(p);
  const OrbitInvariants inv0 = orbit_invariants(base);
  const Multipliers w = multipliers(p);

  JacobianReport rep;
  rep.fd_steps = h;
  InvariantSet& s = rep.invariants;
  s.T = inv0.T;
  s.F1 = inv0.F1;
  s.F2 = inv0.F2;
  s.omega1 = w.omega1;
  s.omega2 = w.omega2;
  s.grad_omega1 = w.grad_omega1;
  s.grad_omega2 = w.grad_omega2;

  Gradient grad_mu_plus{};
  for (int idx = 0; idx < 3; ++idx) {
    auto eval = [&](double t) {
      const WaveOrbit o = WaveOrbit::build(shifted(p, idx, t));
      const OrbitInvariants inv = orbit_invariants(o);
      return std::vector<double>{inv.T, inv.F1, inv.F2, o.at_theta(0.0).mu};
    };
    const FdVectorEstimate d = richardson_vector(eval, h[idx]);
    auto noise = [&](double f) { return kEvalNoise * std::abs(f) / h[idx]; };
    s.grad_T[idx] = d.value[0];
    s.grad_F1[idx] = d.value[1];
    s.grad_F2[idx] = d.value[2];
    grad_mu_plus[idx] = d.value[3];
    s.err_T[idx] = std::abs(d.value[0] - d.coarse[0]) + noise(inv0.T);
    s.err_F1[idx] = std::abs(d.value[1] - d.coarse[1]) + noise(inv0.F1);
    s.err_F2[idx] = std::abs(d.value[2] - d.coarse[2]) + noise(inv0.F2);
  }

  const auto& gw = w.grad_omega1;
  rep.J_T_omega1 = det2(s.grad_T[1], s.grad_T[2], gw[1], gw[2]);
  rep.J_T_F1 = det2(s.grad_T[1], s.grad_T[2], s.grad_F1[1], s.grad_F1[2]);
  rep.J3 = det3(s.grad_T, s.grad_F1, s.grad_F2);
  rep.product = rep.J_T_F1 * rep.J3;

  rep.fd_error.J_T_omega1 = s.err_T[1] * std::abs(gw[2]) + s.err_T[2] * std::abs(gw[1]);
  rep.fd_error.J_T_F1 = s.err_T[1] * std::abs(s.grad_F1[2]) + s.err_T[2] * std::abs(s.grad_F1[1]) +
                        s.err_F1[1] * std::abs(s.grad_T[2]) + s.err_F1[2] * std::abs(s.grad_T[1]);
  rep.fd_error.J3 = det3_error(s.grad_T, s.grad_F1, s.grad_F2, s.err_T, s.err_F1, s.err_F2);
  rep.fd_error.product = std::abs(rep.J_T_F1) * rep.fd_error.J3 +
                         std::abs(rep.J3) * rep.fd_error.J_T_F1 +
                         rep.fd_error.J_T_F1 * rep.fd_error.J3;

  const OrbitPoint crest = base.at_theta(0.0);
  rep.mu_plus = crest.mu;
  rep.mu_xx0 = crest.d2mu;
  rep.J_mu_plus_omega1 = det2(grad_mu_plus[1], grad_mu_plus[2], gw[1], gw[2]);
  rep.theta = -rep.mu_xx0 * rep.J_T_omega1 / rep.J_mu_plus_omega1;

  rep.fd_reliable = rep.fd_error.J_T_omega1 <= 0.1 * std::abs(rep.J_T_omega1) &&
                    rep.fd_error.J_T_F1 <= 0.1 * std::abs(rep.J_T_F1) &&
                    rep.fd_error.J3 <= 0.1 * std::abs(rep.J3);
  rep.classification = classify(rep.J_T_omega1, rep.fd_error.J_T_omega1, rep.product,
                                rep.fd_error.product, rep.fd_reliable);
  return rep;
}

AppendixReport appendix_identities(const WaveParameters& p, const FdConfig& cfg) {
  const PotentialScan scan = checked_scan(p, cfg);
  const Gradient h = fd_steps(p, scan, cfg);
  check_stencil(p, h);

  AppendixReport r;
  r.phi_plus = turning_points(p).phi_max;
  const double gap = p.c - r.phi_plus;
  r.mu_plus = p.a / positive_pow(gap, p.b);
  r.d2phi0 = r.phi_plus - r.mu_plus;
  // mu_xx = (b phi''/(c-phi)) mu at the crest, where phi' = 0
  r.mu_xx0 = p.b * r.d2phi0 / gap * r.mu_plus;

  auto crest = [&](int idx) {
    return [&p, idx](double t) { return turning_points(shifted(p, idx, t)).phi_max; };
  };
  r.dphi_dE = richardson(crest(1), h[1]).value;
  r.dphi_dc = richardson(crest(2), h[2]).value;
  r.dphi_dE_closed = -1.0 / r.d2phi0;
  r.dphi_dc_closed = -r.mu_plus / r.d2phi0;
  r.combo = p.c * r.dphi_dE - r.dphi_dc + 1.0;
  r.combo_closed = -gap / r.d2phi0;

  auto mu_crest = [&](int idx) {
    return [&p, idx](double t) {
      const WaveParameters q = shifted(p, idx, t);
      return q.a / positive_pow(q.c - turning_points(q).phi_max, q.b);
    };
  };
  const double muE = richardson(mu_crest(1), h[1]).value;
  const double muc = richardson(mu_crest(2), h[2]).value;
  const Multipliers w = multipliers(p);
  r.J_mu_omega = det2(muE, muc, w.grad_omega1[1], w.grad_omega1[2]);
  r.J_mu_omega_closed = std::pow(p.a, 1.0 - 1.0 / p.b) * (p.b - 1.0) * p.b * r.combo_closed /
                        positive_pow(gap, p.b + 1.0);

  auto rel = [](double x, double ref) { return std::abs(x - ref) / std::abs(ref); };
  r.rel_residuals = {rel(r.dphi_dE, r.dphi_dE_closed), rel(r.dphi_dc, r.dphi_dc_closed),
                     rel(r.combo, r.combo_closed), rel(r.J_mu_omega, r.J_mu_omega_closed)};
  r.mu_xx0_negative = r.mu_xx0 < 0.0;
  r.J_mu_omega_positive = r.J_mu_omega > 0.0;
  return r;
}

FamilyDerivatives family_derivatives(const WaveParameters& p, std::size_t N, const FdConfig& cfg) {
  const PotentialScan scan = checked_scan(p, cfg);
  const Gradient h = fd_steps(p, scan, cfg);
  check_stencil(p, h);

  FamilyDerivatives fam;
  fam.base = synthesize_profile(p, N);
  fam.steps = h;
  const std::vector<double>& xs = fam.base.x;
  for (int idx = 0; idx < 3; ++idx) {
    // Layout: [T, F1, F2, mu(x_0..), mu_x(x_0..), mu_xx(x_0..)]
    auto eval = [&](double t) {
      const WaveOrbit o = WaveOrbit::build(shifted(p, idx, t));
      const OrbitInvariants inv = orbit_invariants(o);
      std::vector<double> out(3 + 3 * N);
      out[0] = inv.T;
      out[1] = inv.F1;
      out[2] = inv.F2;
      for (std::size_t j = 0; j < N; ++j) {
        const OrbitPoint q = o.at(xs[j]);
        out[3 + j] = q.mu;
        out[3 + N + j] = q.dmu;
        out[3 + 2 * N + j] = q.d2mu;
      }
      return out;
    };
    const FdVectorEstimate d = richardson_vector(eval, h[idx]);
    fam.grad_T[idx] = d.value[0];
    fam.grad_F1[idx] = d.value[1];
    fam.grad_F2[idx] = d.value[2];
    auto slice = [&](std::size_t off) {
      return std::vector<double>(d.value.begin() + static_cast<std::ptrdiff_t>(off),
                                 d.value.begin() + static_cast<std::ptrdiff_t>(off + N));
    };
    fam.mu_p[idx] = slice(3);
    fam.mux_p[idx] = slice(3 + N);
    fam.muxx_p[idx] = slice(3 + 2 * N);
    double err = 0.0, scale = 0.0;
    for (std::size_t j = 3; j < 3 + N; ++j) {
      err = std::max(err, std::abs(d.value[j] - d.coarse[j]));
      scale = std::max(scale, std::abs(d.value[j]));
    }
    fam.max_rel_error[idx] = err / scale;
  }
  return fam;
}

std::array<Gradient, 2> variational_gradient_identity(const FamilyDerivatives& fam) {
  const WaveProfile& prof = fam.base;
  const double b = prof.params.b;
  const std::size_t N = prof.N;
  std::vector<double> g1(N), g2(N), work(N);
  for (std::size_t j = 0; j < N; ++j) {
    g1[j] = dF1_dm(b, prof.mu[j]);
    g2[j] = dF2_dm(b, prof.mu[j], prof.dmu[j], prof.d2mu[j]);
  }
  // densities at the crest, x = 0 (equivalently x = T)
  const double f1_0 = F1_density(b, prof.mu[0]);
  const double f2_0 = F2_density(b, prof.mu[0], prof.dmu[0]);

  const double dx = prof.T / static_cast<double>(N);
  std::array<Gradient, 2> res{};
  for (int idx = 0; idx < 3; ++idx) {
    // mu_p is continuous across x = T (mu_x(0) = 0) but its slope jumps by
    // -T_p mu_xx(0), so the trapezoid sum needs the leading Euler-Maclaurin
    // end correction.
    const double slope_jump = -fam.grad_T[idx] * prof.d2mu[0];
    for (std::size_t j = 0; j < N; ++j) work[j] = g1[j] * fam.mu_p[idx][j];
    const double lhs1 = periodic_integral(work, prof.T) - dx * dx / 12.0 * g1[0] * slope_jump;
    for (std::size_t j = 0; j < N; ++j) work[j] = g2[j] * fam.mu_p[idx][j];
    const double lhs2 = periodic_integral(work, prof.T) - dx * dx / 12.0 * g2[0] * slope_jump;
    const double rhs1 = fam.grad_F1[idx] - f1_0 * fam.grad_T[idx];
    const double rhs2 = fam.grad_F2[idx] - f2_0 * fam.grad_T[idx];
    res[0][idx] = std::abs(lhs1 - rhs1) / std::max(std::abs(fam.grad_F1[idx]), 1.0);
    res[1][idx] = std::abs(lhs2 - rhs2) / std::max(std::abs(fam.grad_F2[idx]), 1.0);
  }
  return res;
}

}  // namespace bch
