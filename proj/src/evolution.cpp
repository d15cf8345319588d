#include "bch/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bch/invariants.hpp"
#include "bch/kernels.hpp"

namespace bch {

namespace {

constexpr double kBlowUp = 1e6;

double* as_doubles(std::vector<cplx>& z) { return reinterpret_cast<double*>(z.data()); }

// H1 weights on the half spectrum, including the factor 2 for the mirrored
// negative modes. The Nyquist mode counts once and carries no derivative
// (matching spectral_derivative).
std::vector<double> h1_weights(std::size_t n, double period) {
  const auto k = wavenumbers(n, period);
  std::vector<double> w(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (j == 0) w[j] = 1.0;
    else if (n % 2 == 0 && j == n / 2) w[j] = 1.0;
    else w[j] = 2.0 * (1.0 + k[j] * k[j]);
  }
  return w;
}

}  // namespace

std::vector<double> reconstruct_velocity(std::span<const double> m, double period) {
  const std::size_t n = m.size();
  RealFft fft(n);
  std::vector<cplx> X(fft.spectrum_size());
  fft.forward(m, X);
  const auto k = wavenumbers(n, period);
  for (std::size_t j = 0; j < X.size(); ++j) X[j] /= 1.0 + k[j] * k[j];
  std::vector<double> u(n);
  fft.inverse(X, u);
  return u;
}

struct Evolver::Impl {
  std::size_t n;
  double T;
  double b;
  double c;
  RealFft fft;
  std::vector<double> mask;       // 2/3 rule
  std::vector<double> k;          // i k for m_x
  std::vector<double> kfull;      // unfiltered wavenumbers
  std::vector<double> helm;       // 1/(1+k^2)
  std::vector<double> helm_k;     // k/(1+k^2) for u_x
  std::vector<cplx> M, Z;
  std::vector<double> mf, mx, u, ux;
  std::vector<double> k1, k2, k3, k4, stage;

  Impl(std::size_t n_, double T_, double b_, double c_)
      : n(n_), T(T_), b(b_), c(c_), fft(n_) {
    const std::size_t ns = n / 2 + 1;
    k = wavenumbers(n, T);
    kfull = k;
    mask.resize(ns);
    helm.resize(ns);
    helm_k.resize(ns);
    for (std::size_t j = 0; j < ns; ++j) {
      mask[j] = (3 * j < n) ? 1.0 : 0.0;
      helm[j] = mask[j] / (1.0 + k[j] * k[j]);
      helm_k[j] = k[j] * helm[j];
      k[j] *= mask[j];
    }
    M.resize(ns);
    Z.resize(ns);
    for (auto* v : {&mf, &mx, &u, &ux, &k1, &k2, &k3, &k4, &stage}) v->resize(n);
  }

  void rhs(std::span<const double> m, std::span<double> out) {
    const auto& kt = kernels::active();
    const std::size_t ns = M.size();
    fft.forward(m, M);
    kt.scale_complex(mask.data(), as_doubles(M), ns);
    fft.inverse(M, mf);

    Z = M;
    kt.scale_complex_i(k.data(), as_doubles(Z), ns);
    fft.inverse(Z, mx);
    Z = M;
    kt.scale_complex(helm.data(), as_doubles(Z), ns);
    fft.inverse(Z, u);
    Z = M;
    kt.scale_complex_i(helm_k.data(), as_doubles(Z), ns);
    fft.inverse(Z, ux);

    kt.momentum_rhs(c, b, mf.data(), mx.data(), u.data(), ux.data(), out.data(), n);
    fft.forward(out, Z);
    kt.scale_complex(mask.data(), as_doubles(Z), ns);
    fft.inverse(Z, out);
  }

  void velocity(std::span<const double> m, std::span<double> out) {
    fft.forward(m, Z);
    for (std::size_t j = 0; j < Z.size(); ++j) Z[j] /= 1.0 + kfull[j] * kfull[j];
    fft.inverse(Z, out);
  }
};

Evolver::Evolver(std::size_t N, double period, double b, double frame_speed)
    : impl_(std::make_unique<Impl>(N, period, b, frame_speed)) {}
Evolver::~Evolver() = default;
Evolver::Evolver(Evolver&&) noexcept = default;
Evolver& Evolver::operator=(Evolver&&) noexcept = default;

std::size_t Evolver::size() const noexcept { return impl_->n; }
double Evolver::period() const noexcept { return impl_->T; }

void Evolver::rhs(std::span<const double> m, std::span<double> out) { impl_->rhs(m, out); }

EvolutionState Evolver::make_state(std::vector<double> m) const {
  EvolutionState s;
  s.T = impl_->T;
  s.dx = impl_->T / static_cast<double>(impl_->n);
  s.u = reconstruct_velocity(m, impl_->T);
  s.m = std::move(m);
  return s;
}

double Evolver::cfl_bound(const EvolutionState& s) const {
  double speed = 0.0;
  for (double v : s.u) speed = std::max(speed, std::abs(v - impl_->c));
  if (!(speed > 0.0)) speed = 1.0;
  return 0.5 * s.dx / speed;
}

void Evolver::step(EvolutionState& s, double dt) {
  Impl& d = *impl_;
  const auto& kt = kernels::active();
  const std::size_t n = d.n;
  d.rhs(s.m, d.k1);
  kt.add_scaled(s.m.data(), 0.5 * dt, d.k1.data(), d.stage.data(), n);
  d.rhs(d.stage, d.k2);
  kt.add_scaled(s.m.data(), 0.5 * dt, d.k2.data(), d.stage.data(), n);
  d.rhs(d.stage, d.k3);
  kt.add_scaled(s.m.data(), dt, d.k3.data(), d.stage.data(), n);
  d.rhs(d.stage, d.k4);
  kt.rk4_combine(s.m.data(), dt / 6.0, d.k1.data(), d.k2.data(), d.k3.data(), d.k4.data(),
                 s.m.data(), n);
  s.t += dt;

  const double lo = kt.min_value(s.m.data(), n);
  const double hi = kt.max_abs(s.m.data(), n);
  if (!std::isfinite(hi) || hi > kBlowUp) {
    std::ostringstream os;
    os << "max |m| = " << hi << " at t = " << s.t;
    throw Error(ErrorKind::BlowUp, os.str());
  }
  if (!(lo > 0.0)) {
    std::ostringstream os;
    os << "min m = " << lo << " at t = " << s.t;
    throw Error(ErrorKind::PositivityLost, os.str());
  }
  d.velocity(s.m, s.u);
}

ConservedValues conserved_values(std::span<const double> m, double period, double b) {
  const std::size_t n = m.size();
  const auto mx = spectral_derivative(m, period, 1);
  std::vector<double> f1(n), f2(n);
  for (std::size_t j = 0; j < n; ++j) {
    f1[j] = F1_density(b, m[j]);
    f2[j] = F2_density(b, m[j], mx[j]);
  }
  return {periodic_integral(m, period), periodic_integral(f1, period),
          periodic_integral(f2, period)};
}

double h1_norm(std::span<const double> v, double period) {
  const auto X = fourier_coefficients(v);
  const auto w = h1_weights(v.size(), period);
  double s = 0.0;
  for (std::size_t j = 0; j < X.size(); ++j) s += w[j] * std::norm(X[j]);
  return std::sqrt(period * s);
}

namespace {

struct ShiftObjective {
  std::vector<cplx> m_hat;
  std::vector<cplx> mu_hat;
  std::vector<double> k;
  std::vector<double> w;
  double T;

  double operator()(double x0) const {
    double s = 0.0;
    for (std::size_t j = 0; j < m_hat.size(); ++j) {
      const cplx d = m_hat[j] - mu_hat[j] * std::polar(1.0, -k[j] * x0);
      s += w[j] * std::norm(d);
    }
    return T * s;
  }
};

ShiftObjective make_objective(std::span<const double> m, std::span<const double> mu,
                              double period) {
  ShiftObjective f;
  f.m_hat = fourier_coefficients(m);
  f.mu_hat = fourier_coefficients(mu);
  f.k = wavenumbers(m.size(), period);
  f.w = h1_weights(m.size(), period);
  f.T = period;
  // The Nyquist mode cannot be shifted exactly on the grid; drop it.
  if (m.size() % 2 == 0) {
    f.m_hat.back() = 0.0;
    f.mu_hat.back() = 0.0;
  }
  return f;
}

}  // namespace

double shifted_h1_distance(std::span<const double> m, std::span<const double> mu, double period,
                           double x0) {
  return std::sqrt(make_objective(m, mu, period)(x0));
}

OrbitalDistance orbital_distance(std::span<const double> m, std::span<const double> mu,
                                 double period) {
  const std::size_t n = m.size();
  const ShiftObjective f = make_objective(m, mu, period);

  // Coarse: maximize the weighted cross-correlation on the grid shifts.
  RealFft fft(n);
  std::vector<cplx> P(f.m_hat.size());
  // c2r supplies the mirrored modes itself, so use the one-sided weight 1 + k^2
  for (std::size_t j = 0; j < P.size(); ++j)
    P[j] = (1.0 + f.k[j] * f.k[j]) * f.m_hat[j] * std::conj(f.mu_hat[j]);
  std::vector<double> corr(n);
  fft.inverse(P, corr);
  const std::size_t best =
      static_cast<std::size_t>(std::max_element(corr.begin(), corr.end()) - corr.begin());
  const double dx = period / static_cast<double>(n);

  // Golden-section on the bracketing cells.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = static_cast<double>(best) * dx - dx;
  double hi = static_cast<double>(best) * dx + dx;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-11 * std::max(1.0, period)) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
    }
  }
  OrbitalDistance out;
  out.x0 = 0.5 * (lo + hi);
  const double val = f(out.x0);
  out.rho = std::sqrt(std::max(val, 0.0));
  out.x0 = std::fmod(out.x0, period);
  if (out.x0 < 0.0) out.x0 += period;
  return out;
}

std::vector<double> make_perturbation(const WaveProfile& prof, const PerturbationSpec& spec) {
  const std::size_t N = prof.N;
  std::vector<double> v(N, 0.0);
  if (spec.eps == 0.0) return v;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const double kappa = 2.0 * std::numbers::pi / prof.T;
  const double a0 = nd(rng);
  for (std::size_t j = 0; j < N; ++j) v[j] = a0;
  for (std::size_t k = 1; k <= spec.modes; ++k) {
    const double ak = nd(rng) / static_cast<double>(k);
    const double bk = nd(rng) / static_cast<double>(k);
    for (std::size_t j = 0; j < N; ++j) {
      const double arg = kappa * static_cast<double>(k) * prof.x[j];
      v[j] += ak * std::cos(arg) + bk * std::sin(arg);
    }
  }
  if (spec.mode == PerturbationMode::Constrained) {
    const double b = prof.params.b;
    std::vector<double> g1(N), g2(N);
    for (std::size_t j = 0; j < N; ++j) {
      g1[j] = dF1_dm(b, prof.mu[j]);
      g2[j] = dF2_dm(b, prof.mu[j], prof.dmu[j], prof.d2mu[j]);
    }
    // Gram-Schmidt on {g1, g2}, then remove both components from v.
    const double n1 = std::sqrt(kernels::dot(g1, g1));
    for (double& x : g1) x /= n1;
    kernels::axpy(-kernels::dot(g1, g2), g1, g2);
    const double n2 = std::sqrt(kernels::dot(g2, g2));
    for (double& x : g2) x /= n2;
    for (int pass = 0; pass < 2; ++pass) {
      kernels::axpy(-kernels::dot(g1, v), g1, v);
      kernels::axpy(-kernels::dot(g2, v), g2, v);
    }
  }
  const double nv = h1_norm(v, prof.T);
  for (double& x : v) x *= spec.eps / nv;
  return v;
}

RunDiagnostics run_experiment(const WaveProfile& prof, const ExperimentConfig& cfg) {
  const double b = prof.params.b;
  const double T = prof.T;
  const double speed = cfg.frame == Frame::Traveling ? prof.params.c : 0.0;
  if (!(cfg.dt_safety > 0.0) || !(cfg.horizon_periods >= 0.0) || cfg.samples_per_period == 0) {
    throw Error(ErrorKind::Domain, "dt_safety and samples_per_period must be positive");
  }

  std::vector<double> m0 = prof.mu;
  const auto v = make_perturbation(prof, cfg.perturbation);
  kernels::axpy(1.0, v, m0);
  if (!(kernels::min_value(m0) > 0.0)) {
    throw Error(ErrorKind::PositivityLost, "initial data mu + v is not positive");
  }

  Evolver ev(prof.N, T, b, speed);
  EvolutionState st = ev.make_state(std::move(m0));
  const double total = cfg.horizon_periods * T;
  const double dt_cfl = cfg.dt_safety * ev.cfl_bound(st);
  const std::size_t steps =
      total > 0.0 ? static_cast<std::size_t>(std::ceil(total / dt_cfl)) : 0;
  const double dt = steps > 0 ? total / static_cast<double>(steps) : dt_cfl;
  const std::size_t n_samples = static_cast<std::size_t>(
      std::max(1.0, std::round(cfg.horizon_periods * static_cast<double>(cfg.samples_per_period))));
  const std::size_t stride = std::max<std::size_t>(1, steps / n_samples);

  RunDiagnostics diag;
  diag.eps = cfg.perturbation.eps;
  diag.dt = dt;
  const ConservedValues c0 = conserved_values(st.m, T, b);
  auto record = [&] {
    const ConservedValues cv = conserved_values(st.m, T, b);
    const double rho = orbital_distance(st.m, prof.mu, T).rho;
    diag.times.push_back(st.t);
    diag.E_drift.push_back(std::abs(cv.E - c0.E) / std::abs(c0.E));
    diag.F1_drift.push_back(std::abs(cv.F1 - c0.F1) / std::abs(c0.F1));
    diag.F2_drift.push_back(std::abs(cv.F2 - c0.F2) / std::abs(c0.F2));
    diag.rho.push_back(rho);
    diag.max_rho = std::max(diag.max_rho, rho);
    diag.max_E_drift = std::max(diag.max_E_drift, diag.E_drift.back());
    diag.max_F1_drift = std::max(diag.max_F1_drift, diag.F1_drift.back());
    diag.max_F2_drift = std::max(diag.max_F2_drift, diag.F2_drift.back());
  };
  record();
  diag.initial_rho = diag.rho.front();

  try {
    for (std::size_t s = 1; s <= steps; ++s) {
      ev.step(st, dt);
      diag.steps = s;
      if (s % stride == 0 || s == steps) record();
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PositivityLost && e.kind() != ErrorKind::BlowUp) throw;
    diag.aborted = e.kind();
    diag.abort_message = e.what();
  }
  diag.ratio = diag.eps > 0.0 ? diag.max_rho / diag.eps : 0.0;
  diag.final_m = std::move(st.m);
  return diag;
}

}  // namespace bch
