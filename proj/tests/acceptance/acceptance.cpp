// Acceptance checks. Each criterion prints exactly one line
//   [PASS] <id> <summary> | <measurements> | <seconds>
// or [FAIL]. With no argument every criterion runs; with an id only that one.
// The exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bch/error.hpp"
#include "bch/evolution.hpp"
#include "bch/fd.hpp"
#include "bch/invariants.hpp"
#include "bch/spectral.hpp"
#include "bch/stability.hpp"
#include "oracles.hpp"

using namespace bch;

namespace {

constexpr unsigned kSampleSeed = 20240607;
const WaveParameters kRef{2.0, 0.1, 0.09, 1.0};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED(" << what << ")";
    }
  }
};

WaveParameters to_params(const oracle::Wave& w) { return {w.b, w.a, w.E, w.c}; }

std::vector<WaveParameters> sample(std::size_t n) {
  std::vector<WaveParameters> out;
  for (const auto& s : oracle::sample_points(n, kSampleSeed)) out.push_back(to_params(s.w));
  return out;
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

template <class T>
std::string sci(T v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", static_cast<double>(v));
  return buf;
}

// Period by theta quadrature against ODE shooting.
void period_oracle(Outcome& o) {
  double worst = 0.0;
  for (const auto& p : sample(10)) {
    const double T = period(p);
    const double Tref = oracle::period_by_shooting({p.b, p.a, p.E, p.c});
    worst = std::max(worst, rel(T, Tref));
  }
  o.detail << "max rel period gap " << sci(worst) << " (limit 1e-6)";
  o.require(worst < 1e-6, "period gap");
}

// Energy relation, mu relation and first integral at N = 512.
void residual_suite(Outcome& o) {
  double e = 0.0, mu = 0.0, f = 0.0;
  for (const auto& p : sample(10)) {
    const auto r = profile_residuals(synthesize_profile(p, 512));
    e = std::max(e, r.energy);
    mu = std::max(mu, r.mu_relation);
    f = std::max(f, r.first_integral);
  }
  o.detail << "energy " << sci(e) << ", mu-relation " << sci(mu) << ", first integral " << sci(f)
           << " (limit 1e-8)";
  o.require(e < 1e-8 && mu < 1e-8 && f < 1e-8, "residual");
}

// Critical-point equation with the closed-form multipliers.
void critical_point(Outcome& o) {
  double worst = 0.0, weakest = INFINITY;
  for (const auto& p : sample(10)) {
    const auto prof = synthesize_profile(p, 512);
    auto w = multipliers(p);
    worst = std::max(worst, euler_lagrange_residual(prof, w));
    w.omega1 *= 1.01;
    weakest = std::min(weakest, euler_lagrange_residual(prof, w));
  }
  o.detail << "max residual " << sci(worst) << " (limit 1e-7), min residual with omega1 +1% "
           << sci(weakest) << " (floor 1e-4)";
  o.require(worst < 1e-7, "residual");
  o.require(weakest > 1e-4, "perturbed residual");
}

// Translation kernel and the mu_E, mu_c relations.
void kernel_relations(Outcome& o) {
  double kern = 0.0, muE = 0.0, muc = 0.0;
  for (const auto& p : sample(10)) {
    const auto fam = family_derivatives(p, 512);
    const auto op = assemble_operator(fam.base, multipliers(p));
    const auto Lmx = apply_operator(op, fam.base.dmu, fam.base.d2mu, fam.base.d3mu);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < Lmx.size(); ++j) {
      num += Lmx[j] * Lmx[j];
      den += fam.base.dmu[j] * fam.base.dmu[j];
    }
    kern = std::max(kern, std::sqrt(num / den));
    const auto id = proof_identities(fam, op, parameter_jacobians(p));
    muE = std::max(muE, id.muE_residual);
    muc = std::max(muc, id.muc_residual);
  }
  o.detail << "kernel " << sci(kern) << " (limit 1e-6), mu_E " << sci(muE) << ", mu_c "
           << sci(muc) << " (limit 1e-4)";
  o.require(kern < 1e-6, "kernel");
  o.require(muE < 1e-4 && muc < 1e-4, "parameter relations");
}

// Inertia against the sign of {T, omega1}_{E,c}, and sign(theta).
void trichotomy(Outcome& o) {
  int decided = 0, pos = 0, neg = 0, mismatched = 0, theta_bad = 0;
  for (const auto& p : sample(20)) {
    const auto J = parameter_jacobians(p);
    if (std::signbit(J.theta) != std::signbit(J.J_T_omega1)) ++theta_bad;
    if (std::abs(J.J_T_omega1) <= J.fd_error.J_T_omega1) continue;
    ++decided;
    const auto prof = synthesize_profile(p, 512);
    const auto rep = periodic_spectrum(assemble_operator(prof, multipliers(p)), prof);
    if (J.J_T_omega1 > 0.0) {
      ++pos;
      if (!(rep.n_neg == 1 && rep.n_zero == 1)) ++mismatched;
    } else {
      ++neg;
      if (!(rep.n_neg == 2 && rep.n_zero == 1)) ++mismatched;
    }
  }
  o.detail << decided << "/20 signs resolved (" << pos << " positive, " << neg
           << " negative), inertia mismatches " << mismatched << ", theta sign mismatches "
           << theta_bad;
  o.require(mismatched == 0, "inertia");
  o.require(theta_bad == 0, "theta sign");
}

// <H psi, psi> = (omega2)_a {T,F1}_{E,c} {T,F1,F2}_{a,E,c}, H the Hessian.
void psi_product(Outcome& o) {
  double worst = 0.0;
  int sign_ok = 0;
  const auto pts = sample(5);
  for (const auto& p : pts) {
    const auto fam = family_derivatives(p, 512);
    const auto op = assemble_operator(fam.base, multipliers(p));
    const auto jac = parameter_jacobians(p);
    const auto id = proof_identities(fam, op, jac);
    worst = std::max(worst, id.psi_identity_residual);
    const bool product_negative = jac.product < 0.0;
    if ((id.psi_quadratic < 0.0) == product_negative) ++sign_ok;
  }
  o.detail << "max rel gap " << sci(worst) << " (limit 1e-3), sign agreement " << sign_ok << "/"
           << pts.size();
  o.require(worst < 1e-3, "identity");
  o.require(sign_ok == static_cast<int>(pts.size()), "sign");
}

// Crest curvature, {mu+, omega1} and the closed-form crest derivatives.
void crest_identities(Outcome& o) {
  double worst = 0.0;
  int signs = 0;
  for (const auto& p : sample(10)) {
    const auto r = appendix_identities(p);
    for (double x : r.rel_residuals) worst = std::max(worst, x);
    signs += r.mu_xx0_negative && r.J_mu_omega_positive;
  }
  o.detail << "max rel residual " << sci(worst) << " (limit 1e-5), sign conditions " << signs
           << "/10";
  o.require(worst < 1e-5, "closed forms");
  o.require(signs == 10, "signs");
}

// Constrained H1 Rayleigh quotients at a StableCriteriaMet point.
void coercivity(Outcome& o) {
  const auto jac = parameter_jacobians(kRef);
  o.require(jac.classification == Classification::StableCriteriaMet, "classification");
  const auto prof = synthesize_profile(kRef, 512);
  const auto op = assemble_operator(prof, multipliers(kRef));
  const auto c = coercivity_probe(op, prof, 1000);
  o.detail << "min constrained quotient " << sci(c.min_constrained) << ", unconstrained min "
           << sci(c.min_unconstrained) << " (" << c.negative_unconstrained
           << " negative of 1000)";
  o.require(c.min_constrained > 0.0, "constrained quotient");
  o.require(c.negative_unconstrained > 0, "no negative direction");
}

// Orbital distance ladder over 50 periods.
void orbital_ladder(Outcome& o) {
  const auto prof = synthesize_profile(kRef, 512);
  o.require(parameter_jacobians(kRef).classification == Classification::StableCriteriaMet,
            "classification");
  double rmin = INFINITY, rmax = 0.0, drift = 0.0;
  for (double eps : {1e-3, 5e-4, 2.5e-4}) {
    ExperimentConfig cfg;
    cfg.perturbation.eps = eps;
    const auto d = run_experiment(prof, cfg);
    o.require(!d.aborted, "aborted run");
    rmin = std::min(rmin, d.ratio);
    rmax = std::max(rmax, d.ratio);
    drift = std::max({drift, d.max_E_drift, d.max_F1_drift, d.max_F2_drift});
  }
  ExperimentConfig still;
  still.perturbation.eps = 0.0;
  const auto d0 = run_experiment(prof, still);
  o.detail << "max_rho/eps in [" << rmin << ", " << rmax << "], spread " << rmax / rmin
           << " (limit 3), max drift " << sci(drift) << " (limit 1e-8), unperturbed rho "
           << sci(d0.max_rho) << " (limit 1e-6)";
  o.require(rmax / rmin < 3.0, "spread");
  o.require(drift < 1e-8, "drift");
  o.require(d0.max_rho < 1e-6, "unperturbed");
}

// Hill vs symbol, shift optimizer vs scan, FD vs closed-form multiplier gradients.
void oracle_equivalence(Outcome& o) {
  OperatorCoefficients op;
  op.T = 6.0;
  op.N = 256;
  op.p.assign(op.N, 0.45);
  op.symmetric_r.assign(op.N, -0.8);
  const auto ev = hill_eigenvalues(op, 64);
  std::vector<double> sym;
  const double kappa = 2.0 * std::numbers::pi / op.T;
  for (long k = -64; k <= 64; ++k) sym.push_back(-0.8 + 0.45 * kappa * kappa * double(k * k));
  std::sort(sym.begin(), sym.end());
  double hill = 0.0;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    hill = std::max(hill, std::abs(ev[i] - sym[i]) / std::max(1.0, std::abs(sym[i])));
  }

  const auto prof = synthesize_profile(kRef, 256);
  double shift = 0.0;
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    PerturbationSpec spec;
    spec.eps = 2e-2;
    spec.seed = seed;
    auto m = prof.mu;
    const auto v = make_perturbation(prof, spec);
    for (std::size_t j = 0; j < m.size(); ++j) m[j] += v[j];
    m = periodic_shift(m, prof.T, 0.21 * double(seed - 10) * prof.T);
    const double rho = orbital_distance(m, prof.mu, prof.T).rho;
    const double ref = oracle::brute_force_shift(m, prof.mu, prof.T).rho;
    shift = std::max(shift, rel(rho, ref));
  }

  double grad = 0.0;
  for (const auto& p : sample(10)) {
    const auto w = multipliers(p);
    const double base[3] = {p.a, p.E, p.c};
    for (int k = 0; k < 3; ++k) {
      const double h = 1e-4 * std::max(std::abs(base[k]), 1e-2);
      auto component = [&](int which) {
        return [&, which](double d) {
          double v[3] = {p.a, p.E, p.c};
          v[k] += d;
          const auto m = multipliers({p.b, v[0], v[1], v[2]});
          return which == 1 ? m.omega1 : m.omega2;
        };
      };
      const auto d1 = richardson(component(1), h);
      const auto d2 = richardson(component(2), h);
      grad = std::max(grad, std::abs(d1.value - w.grad_omega1[k]) /
                                std::max(1.0, std::abs(w.grad_omega1[k])));
      grad = std::max(grad, std::abs(d2.value - w.grad_omega2[k]) /
                                std::max(1.0, std::abs(w.grad_omega2[k])));
    }
  }
  o.detail << "Hill vs symbol " << sci(hill) << " (limit 1e-10), rho vs scan " << sci(shift)
           << " (limit 1e-6), omega gradients " << sci(grad) << " (limit 1e-6)";
  o.require(hill < 1e-10, "Hill");
  o.require(shift < 1e-6, "shift");
  o.require(grad < 1e-6, "gradients");
}

struct Criterion {
  const char* id;
  const char* summary;
  double budget_s;
  void (*run)(Outcome&);
};

const Criterion kCriteria[] = {
    {"01_period_oracle", "period quadrature vs ODE shooting, 10 points", 10.0, period_oracle},
    {"02_profile_residuals", "profile residual suite at N=512, 10 points", 10.0, residual_suite},
    {"03_critical_point", "Euler-Lagrange residual and multiplier uniqueness", 5.0, critical_point},
    {"04_kernel_relations", "operator kernel and parameter-derivative relations", 30.0, kernel_relations},
    {"05_trichotomy", "trichotomy inertia and sign of theta, 20 points", 120.0, trichotomy},
    {"06_psi_product", "quadratic form of psi vs determinant product, 5 points", 120.0, psi_product},
    {"07_crest_identities", "crest identities, 10 points", 30.0, crest_identities},
    {"08_coercivity", "coercivity probe, 1000 trials", 60.0, coercivity},
    {"09_orbital_ladder", "orbital stability ladder over 50 periods at N=512", 600.0, orbital_ladder},
    {"10_oracle_equivalence", "oracle equivalences", 60.0, oracle_equivalence},
};

bool run_one(const Criterion& c) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.run(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > c.budget_s) {
    o.pass = false;
    o.detail << " FAILED(runtime over " << c.budget_s << " s)";
  }
  std::printf("[%s] %s %s | %s | %.1f s\n", o.pass ? "PASS" : "FAIL", c.id, c.summary,
              o.detail.str().c_str(), secs);
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  int failed = 0;
  bool matched = false;
  for (const Criterion& c : kCriteria) {
    if (argc > 1 && std::string(argv[1]) != c.id) continue;
    matched = true;
    failed += run_one(c) ? 0 : 1;
  }
  if (!matched) {
    std::fprintf(stderr, "unknown criterion '%s'\n", argv[1]);
    return 2;
  }
  return failed;
}
