#include "bch/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bch/error.hpp"
#include "bch/fourier.hpp"

namespace bch {

double period(const WaveParameters& params) { return WaveOrbit::build(params).period(); }

WaveProfile sample_profile(const WaveOrbit& orbit, std::size_t N) {
  WaveProfile prof;
  prof.params = orbit.params();
  prof.T = orbit.period();
  prof.N = N;
  prof.phi_min = orbit.phi_min();
  prof.phi_max = orbit.phi_max();
  for (auto* v : {&prof.x, &prof.phi, &prof.dphi, &prof.d2phi, &prof.mu, &prof.dmu, &prof.d2mu, &prof.d3mu})
    v->resize(N);
  for (std::size_t j = 0; j < N; ++j) {
    const double x = prof.T * static_cast<double>(j) / static_cast<double>(N);
    const OrbitPoint pt = orbit.at(x);
    prof.x[j] = x;
    prof.phi[j] = pt.phi;
    prof.dphi[j] = pt.dphi;
    prof.d2phi[j] = pt.d2phi;
    prof.mu[j] = pt.mu;
    prof.dmu[j] = pt.dmu;
    prof.d2mu[j] = pt.d2mu;
    prof.d3mu[j] = pt.d3mu;
  }
  return prof;
}

WaveProfile synthesize_profile(const WaveParameters& params, std::size_t N) {
  if (!is_power_of_two(N, 64)) {
    std::ostringstream os;
    os << "grid size N = " << N << " must be a power of two >= 64";
    throw Error(ErrorKind::Domain, os.str());
  }
  return sample_profile(WaveOrbit::build(params), N);
}

double harmonic_period(double b, double a, double c) {
  WaveParameters p{b, a, 0.0, c};
  const PotentialScan s = critical_points(p);
  const double curvature = -1.0 + b * a / positive_pow(c - s.phi2, b + 1.0);
  return 2.0 * std::numbers::pi / std::sqrt(curvature);
}

WaveProfile equilibrium_profile(double b, double a, double c, std::size_t N, double T) {
  WaveParameters p{b, a, 0.0, c};
  const PotentialScan s = critical_points(p);
  p.E = s.V_phi2;
  WaveProfile prof;
  prof.params = p;
  prof.T = T;
  prof.N = N;
  prof.phi_min = prof.phi_max = s.phi2;
  prof.x.resize(N);
  for (std::size_t j = 0; j < N; ++j) prof.x[j] = T * static_cast<double>(j) / static_cast<double>(N);
  prof.phi.assign(N, s.phi2);
  prof.dphi.assign(N, 0.0);
  // phi'' = phi - mu vanishes at the critical point up to root accuracy
  const double mu = a / positive_pow(c - s.phi2, b);
  prof.d2phi.assign(N, s.phi2 - mu);
  prof.mu.assign(N, mu);
  prof.dmu.assign(N, 0.0);
  prof.d2mu.assign(N, 0.0);
  prof.d3mu.assign(N, 0.0);
  return prof;
}

ProfileResiduals profile_residuals(const WaveProfile& prof) {
  const WaveParameters& p = prof.params;
  ProfileResiduals r;
  const auto D1 = spectral_derivative(prof.phi, prof.T, 1);
  const auto D2 = spectral_derivative(prof.phi, prof.T, 2);
  std::vector<double> momentum(prof.N);
  for (std::size_t j = 0; j < prof.N; ++j) momentum[j] = prof.phi[j] - D2[j];
  const auto Dm = spectral_derivative(momentum, prof.T, 1);

  for (std::size_t j = 0; j < prof.N; ++j) {
    const double phi = prof.phi[j];
    const double dphi = prof.dphi[j];
    const double energy = 0.5 * dphi * dphi + eval_potential(phi, p) - p.E;
    const double f = (p.c - phi) * (phi - prof.d2phi[j]) +
                     0.5 * (p.b - 1.0) * (dphi * dphi - phi * phi) - (p.b - 1.0) * p.E;
    const double mu_rel = prof.mu[j] - momentum[j];
    const double ode = (phi - p.c) * Dm[j] + p.b * D1[j] * momentum[j];
    r.energy = std::max(r.energy, std::abs(energy));
    r.first_integral = std::max(r.first_integral, std::abs(f));
    r.mu_relation = std::max(r.mu_relation, std::abs(mu_rel));
    r.third_order_ode = std::max(r.third_order_ode, std::abs(ode));
  }
  return r;
}

}  // namespace bch
