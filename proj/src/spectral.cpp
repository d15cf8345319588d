#include "bch/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "bch/error.hpp"
#include "bch/fourier.hpp"
#include "bch/kernels.hpp"

namespace bch {

namespace {

double sup_abs(const std::vector<double>& v) { return kernels::max_abs(v); }

double l2_norm(const std::vector<double>& v, double T) {
  return std::sqrt(T * kernels::dot(v, v) / static_cast<double>(v.size()));
}

double inner(const std::vector<double>& u, const std::vector<double>& v, double T) {
  return T * kernels::dot(u, v) / static_cast<double>(u.size());
}

// Coefficient c_n of a real grid function for n in [-N/2, N/2]; the Nyquist
// term is split evenly between +-N/2.
cplx coefficient(const std::vector<cplx>& c, long n, std::size_t N) {
  const long half = static_cast<long>(N / 2);
  const long m = std::labs(n);
  if (m > half) return {0.0, 0.0};
  cplx v = c[static_cast<std::size_t>(m)];
  if (m == half) v *= 0.5;
  return n >= 0 ? v : std::conj(v);
}

Eigen::MatrixXcd hill_matrix(const OperatorCoefficients& op, std::size_t M) {
  const auto pc = fourier_coefficients(op.p);
  const auto rc = fourier_coefficients(op.symmetric_r);
  const double kappa = 2.0 * std::numbers::pi / op.T;
  const long m = static_cast<long>(M);
  const Eigen::Index n = 2 * m + 1;
  Eigen::MatrixXcd A(n, n);
  for (long j = -m; j <= m; ++j) {
    for (long k = -m; k <= m; ++k) {
      const cplx pj = coefficient(pc, j - k, op.N);
      const cplx rj = coefficient(rc, j - k, op.N);
      A(j + m, k + m) = pj * (static_cast<double>(j * k) * kappa * kappa) + rj;
    }
  }
  return A;
}

// Modified Gram-Schmidt under the grid L2 inner product.
std::vector<std::vector<double>> orthonormalize(std::vector<std::vector<double>> basis, double T) {
  std::vector<std::vector<double>> out;
  for (auto& v : basis) {
    for (const auto& q : out) {
      const double c = inner(q, v, T);
      kernels::axpy(-c, q, v);
    }
    const double nv = l2_norm(v, T);
    if (nv > 1e-300) {
      for (double& x : v) x /= nv;
      out.push_back(std::move(v));
    }
  }
  return out;
}

void project_out(const std::vector<std::vector<double>>& q, std::vector<double>& v, double T) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& e : q) kernels::axpy(-inner(e, v, T), e, v);
  }
}

struct Trial {
  std::vector<double> v;
};

// Random smooth periodic function with a Gaussian-damped spectrum.
Trial random_trial(std::mt19937_64& rng, std::size_t N, double T, std::size_t K) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double kappa = 2.0 * std::numbers::pi / T;
  Trial t;
  t.v.assign(N, 0.0);
  const double a0 = nd(rng);
  for (std::size_t j = 0; j < N; ++j) t.v[j] = a0;
  for (std::size_t k = 1; k <= K; ++k) {
    const double w = std::exp(-0.5 * std::pow(static_cast<double>(k) / 4.0, 2));
    const double ak = w * nd(rng);
    const double bk = w * nd(rng);
    const double kk = static_cast<double>(k) * kappa;
    for (std::size_t j = 0; j < N; ++j) {
      const double arg = kk * T * static_cast<double>(j) / static_cast<double>(N);
      const double c = std::cos(arg), s = std::sin(arg);
      t.v[j] += ak * c + bk * s;
    }
  }
  return t;
}

std::vector<double> grid_mode_derivative(const std::vector<double>& v, double T) {
  return spectral_derivative(v, T, 1);
}

}  // namespace

CoefficientPoint coefficients_at(double b, const Multipliers& w, double mu, double mux,
                                 double muxx) {
  const double s = 2.0 + 1.0 / b;
  const double ib = 1.0 / b;
  const double b2 = b * b;
  const double mu_s = std::pow(mu, -s);
  CoefficientPoint cp;
  cp.p = w.omega2 * mu_s / b2;
  cp.dp = -s * w.omega2 * mu_s / mu * mux / b2;
  cp.r_sym = 0.5 * w.omega1 * ib * (ib - 1.0) * std::pow(mu, ib - 2.0) +
             0.5 * w.omega2 *
                 (-s * (s + 1.0) * mux * mux * mu_s / (mu * mu) / b2 +
                  2.0 * s * muxx * mu_s / mu / b2 + ib * (ib + 1.0) * std::pow(mu, -ib - 2.0));
  return cp;
}

OperatorCoefficients assemble_operator(const WaveProfile& prof, const Multipliers& w) {
  OperatorCoefficients op;
  op.b = prof.params.b;
  op.T = prof.T;
  op.N = prof.N;
  const std::size_t N = prof.N;
  for (auto* v : {&op.p, &op.q, &op.r, &op.symmetric_r, &op.printed_q}) v->resize(N);
  const double b = op.b;
  for (std::size_t j = 0; j < N; ++j) {
    const CoefficientPoint cp = coefficients_at(b, w, prof.mu[j], prof.dmu[j], prof.d2mu[j]);
    op.p[j] = cp.p;
    op.q[j] = cp.dp;
    op.symmetric_r[j] = cp.r_sym;
    op.r[j] = -cp.r_sym;
    op.printed_q[j] =
        -w.omega2 * (2.0 * b + 1.0) * prof.dmu[j] / (b * std::pow(prof.mu[j], 3.0 + 1.0 / b));
  }
  op.p_min = kernels::min_value(op.p);
  if (!(op.p_min > 0.0)) {
    throw Error(ErrorKind::CoefficientInconsistency, "leading coefficient p is not positive");
  }

  const auto Dp = spectral_derivative(op.p, op.T, 1);
  const double qmax = sup_abs(op.q);
  double gap = 0.0;
  for (std::size_t j = 0; j < N; ++j) gap = std::max(gap, std::abs(op.q[j] - Dp[j]));
  // For a constant state q vanishes identically; measure against p instead.
  op.self_adjoint_gap = gap / (qmax > 0.0 ? qmax : sup_abs(op.p));
  if (op.self_adjoint_gap > 1e-5) {
    std::ostringstream os;
    os << "first-order coefficient differs from p' by " << op.self_adjoint_gap << " (relative)";
    throw Error(ErrorKind::CoefficientInconsistency, os.str());
  }

  double ratio_num = 0.0, ratio_den = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    ratio_num += op.printed_q[j] * op.q[j];
    ratio_den += op.q[j] * op.q[j];
  }
  op.printed_q_ratio = ratio_den > 0.0 ? ratio_num / ratio_den : b * b;
  return op;
}

std::vector<double> apply_operator(const OperatorCoefficients& op, const std::vector<double>& v,
                                   const std::vector<double>& vx,
                                   const std::vector<double>& vxx) {
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    out[j] = -op.p[j] * vxx[j] - op.q[j] * vx[j] + op.symmetric_r[j] * v[j];
  }
  return out;
}

std::vector<double> apply_operator(const OperatorCoefficients& op, const std::vector<double>& v) {
  return apply_operator(op, v, spectral_derivative(v, op.T, 1), spectral_derivative(v, op.T, 2));
}

double quadratic_form(const OperatorCoefficients& op, const std::vector<double>& v) {
  const auto vx = grid_mode_derivative(v, op.T);
  std::vector<double> dens(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    dens[j] = op.p[j] * vx[j] * vx[j] + op.symmetric_r[j] * v[j] * v[j];
  }
  return periodic_integral(dens, op.T);
}

std::vector<double> hill_eigenvalues(const OperatorCoefficients& op, std::size_t M) {
  if (M == 0 || 4 * M > op.N) {
    std::ostringstream os;
    os << "mode count M = " << M << " must satisfy 1 <= M <= N/4 = " << op.N / 4;
    throw Error(ErrorKind::Domain, os.str());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hill_matrix(op, M), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

SpectralReport periodic_spectrum(const OperatorCoefficients& op, const WaveProfile& prof,
                                 const SpectrumOptions& opts) {
  SpectralReport rep;
  const std::size_t M = opts.modes == 0 ? op.N / 4 : opts.modes;
  rep.modes = M;
  const auto ev = hill_eigenvalues(op, M);
  const auto ev_half = hill_eigenvalues(op, std::max<std::size_t>(M / 2, 1));
  const std::size_t cnt = std::min({opts.convergence_count, ev.size(), ev_half.size()});
  for (std::size_t i = 0; i < cnt; ++i) {
    const double d = std::abs(ev[i] - ev_half[i]) / std::max(1.0, std::abs(ev[i]));
    rep.convergence_shift = std::max(rep.convergence_shift, d);
  }
  if (rep.convergence_shift > opts.convergence_tol) {
    std::ostringstream os;
    os << "lowest eigenvalues moved by " << rep.convergence_shift << " between M = " << M / 2
       << " and M = " << M << "; increase N";
    throw Error(ErrorKind::DiscretizationNotConverged, os.str());
  }

  const auto Lmx = apply_operator(op, prof.dmu, prof.d2mu, prof.d3mu);
  const double mx = sup_abs(prof.dmu);
  rep.kernel_residual = mx > 0.0 ? sup_abs(Lmx) / mx : 0.0;

  const double kappa = 2.0 * std::numbers::pi / op.T;
  const double scale = sup_abs(op.p) * kappa * kappa + sup_abs(op.symmetric_r);
  rep.tau = std::max(1e-8, 10.0 * rep.kernel_residual) * scale;
  for (double l : ev) {
    if (l < -rep.tau) ++rep.n_neg;
    else if (l <= rep.tau) ++rep.n_zero;
    else ++rep.n_pos;
  }
  rep.eigenvalues.assign(ev.begin(), ev.begin() + static_cast<std::ptrdiff_t>(std::min(M, ev.size())));
  return rep;
}

ProofIdentities proof_identities(const FamilyDerivatives& fam, const OperatorCoefficients& op,
                                 const JacobianReport& jac, std::size_t tangent_trials,
                                 std::uint64_t seed) {
  const WaveProfile& prof = fam.base;
  const std::size_t N = prof.N;
  const double b = prof.params.b;
  const double T = prof.T;
  const Multipliers w = multipliers(prof.params);

  std::vector<double> g1(N), g2(N);
  for (std::size_t j = 0; j < N; ++j) {
    g1[j] = dF1_dm(b, prof.mu[j]);
    g2[j] = dF2_dm(b, prof.mu[j], prof.dmu[j], prof.d2mu[j]);
  }

  auto hessian = [&](int idx) {
    auto v = apply_operator(op, fam.mu_p[idx], fam.mux_p[idx], fam.muxx_p[idx]);
    for (double& x : v) x *= hessian_scale;
    return v;
  };
  auto rel_l2 = [&](const std::vector<double>& got, const std::vector<double>& want) {
    std::vector<double> d(N);
    for (std::size_t j = 0; j < N; ++j) d[j] = got[j] - want[j];
    return l2_norm(d, T) / l2_norm(want, T);
  };

  ProofIdentities out;
  {
    std::vector<double> want(N);
    for (std::size_t j = 0; j < N; ++j) want[j] = w.grad_omega1[1] * g1[j];
    out.muE_residual = rel_l2(hessian(1), want);
    for (std::size_t j = 0; j < N; ++j) want[j] = w.grad_omega1[2] * g1[j];
    out.muc_residual = rel_l2(hessian(2), want);
    for (std::size_t j = 0; j < N; ++j) want[j] = w.grad_omega1[0] * g1[j] + w.grad_omega2[0] * g2[j];
    out.mua_residual = rel_l2(hessian(0), want);
  }

  // psi = {mu, T, F1}_{a,E,c}, expanded along its first row
  const Gradient& Tg = fam.grad_T;
  const Gradient& F1g = fam.grad_F1;
  const std::array<double, 3> cof{Tg[1] * F1g[2] - Tg[2] * F1g[1], Tg[2] * F1g[0] - Tg[0] * F1g[2],
                                  Tg[0] * F1g[1] - Tg[1] * F1g[0]};
  std::vector<double> psi(N, 0.0), psix(N, 0.0), psixx(N, 0.0);
  for (int idx = 0; idx < 3; ++idx) {
    kernels::axpy(cof[idx], fam.mu_p[idx], psi);
    kernels::axpy(cof[idx], fam.mux_p[idx], psix);
    kernels::axpy(cof[idx], fam.muxx_p[idx], psixx);
  }
  auto Hpsi = apply_operator(op, psi, psix, psixx);
  for (double& x : Hpsi) x *= hessian_scale;
  out.psi_quadratic = inner(Hpsi, psi, T);
  out.psi_quadratic_sl = out.psi_quadratic / hessian_scale;
  out.psi_predicted = w.grad_omega2[0] * jac.J_T_F1 * jac.J3;
  out.psi_identity_residual =
      std::abs(out.psi_quadratic - out.psi_predicted) / std::abs(out.psi_predicted);

  const auto constraints = orthonormalize({g1, g2}, T);
  std::mt19937_64 rng(seed);
  const double nH = l2_norm(Hpsi, T);
  for (std::size_t t = 0; t < tangent_trials; ++t) {
    Trial tr = random_trial(rng, N, T, std::min<std::size_t>(24, N / 4));
    project_out(constraints, tr.v, T);
    const double val = std::abs(inner(Hpsi, tr.v, T)) / (nH * l2_norm(tr.v, T));
    out.tangent_max = std::max(out.tangent_max, val);
  }
  out.psi = std::move(psi);
  return out;
}

CoercivityResult coercivity_probe(const OperatorCoefficients& op, const WaveProfile& prof,
                                  std::size_t trials, std::uint64_t seed, std::size_t modes) {
  const std::size_t N = prof.N;
  const double T = prof.T;
  const double b = prof.params.b;
  std::vector<double> g1(N), g2(N);
  for (std::size_t j = 0; j < N; ++j) {
    g1[j] = dF1_dm(b, prof.mu[j]);
    g2[j] = dF2_dm(b, prof.mu[j], prof.dmu[j], prof.d2mu[j]);
  }
  const auto basis = orthonormalize({g1, g2, prof.dmu}, T);

  auto h1_quotient = [&](const std::vector<double>& v) {
    const auto vx = spectral_derivative(v, T, 1);
    const double h1 = inner(v, v, T) + inner(vx, vx, T);
    return quadratic_form(op, v) / h1;
  };

  CoercivityResult res;
  res.trials = trials;
  res.min_constrained = std::numeric_limits<double>::infinity();
  res.min_unconstrained = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  const std::size_t K = std::min<std::size_t>(24, N / 4);
  // Fourier modes alone barely overlap the ground state, which is localized
  // at the crest much like mu itself. Each trial is a random multiple of the
  // unit-norm profile shape plus a unit-norm random Fourier part scaled by
  // 0.3, so the trial set reaches such directions with fair probability.
  std::vector<double> shape = prof.mu;
  {
    const double ns = l2_norm(shape, T);
    for (double& x : shape) x /= ns;
  }
  std::normal_distribution<double> nd(0.0, 1.0);
  for (std::size_t t = 0; t < trials; ++t) {
    Trial tr = random_trial(rng, N, T, K);
    const double nf = l2_norm(tr.v, T);
    for (double& x : tr.v) x *= 0.3 / nf;
    kernels::axpy(nd(rng), shape, tr.v);
    const double qu = h1_quotient(tr.v);
    res.min_unconstrained = std::min(res.min_unconstrained, qu);
    if (qu < 0.0) ++res.negative_unconstrained;
    project_out(basis, tr.v, T);
    res.min_constrained = std::min(res.min_constrained, h1_quotient(tr.v));
  }
  res.kernel_quotient = h1_quotient(prof.dmu);

  // Exact minimum of the H1 quotient on the constrained Galerkin space.
  const std::size_t M = modes == 0 ? N / 4 : modes;
  const long m = static_cast<long>(M);
  const Eigen::Index n = 2 * m + 1;
  const Eigen::MatrixXcd A = hill_matrix(op, M);
  Eigen::MatrixXcd C(n, 3);
  const std::array<const std::vector<double>*, 3> cons{&g1, &g2, &prof.dmu};
  for (int c = 0; c < 3; ++c) {
    const auto fc = fourier_coefficients(*cons[c]);
    for (long k = -m; k <= m; ++k) C(k + m, c) = coefficient(fc, k, N);
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(C);
  const Eigen::MatrixXcd Qfull = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd Q = Qfull.rightCols(n - 3);
  const double kappa = 2.0 * std::numbers::pi / T;
  Eigen::VectorXcd Bdiag(n);
  for (long k = -m; k <= m; ++k) Bdiag(k + m) = 1.0 + static_cast<double>(k * k) * kappa * kappa;
  const Eigen::MatrixXcd Ac = Q.adjoint() * A * Q;
  const Eigen::MatrixXcd Bc = Q.adjoint() * Bdiag.asDiagonal() * Q;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(Ac, Bc, Eigen::EigenvaluesOnly);
  res.constrained_min_eigenvalue = ges.eigenvalues()(0);
  return res;
}

double monodromy_theta(const WaveOrbit& orbit, const Multipliers& w) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 2>;
  const double b = orbit.params().b;
  auto rhs = [&](const State& y, State& dy, double th) {
    const OrbitPoint pt = orbit.at_theta(th);
    const CoefficientPoint cp = coefficients_at(b, w, pt.mu, pt.dmu, pt.d2mu);
    const double hx = orbit.h(th);
    // y = (v, p v')
    dy[0] = hx * y[1] / cp.p;
    dy[1] = hx * cp.r_sym * y[0];
  };
  State y{1.0, 0.0};
  auto stepper = ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<State>());
  ode::integrate_adaptive(stepper, rhs, y, 0.0, std::numbers::pi, 1e-3);
  const OrbitPoint crest = orbit.at_theta(0.0);
  const double p0 = coefficients_at(b, w, crest.mu, crest.dmu, crest.d2mu).p;
  return y[1] / p0;
}

}  // namespace bch
