#pragma once

// Reference computations used only by the tests. None of them calls into
// the library's quadrature, root finding or FFT code, so agreement with the
// library is a genuine cross-check.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace oracle {

/// Plain bisection on [lo, hi]; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iterations = 200) {
  double flo = f(lo);
  if (flo * f(hi) > 0.0) throw std::invalid_argument("bisect: no sign change");
  for (int i = 0; i < iterations && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Wave {
  double b, a, E, c;
};

inline double potential(const Wave& w, double phi) {
  return -0.5 * phi * phi + w.a / ((w.b - 1.0) * std::pow(w.c - phi, w.b - 1.0));
}

inline double force(const Wave& w, double phi) {
  return phi - w.a / std::pow(w.c - phi, w.b);
}

struct Critical {
  double phi1, phi2;
};

/// Critical points of the potential as roots of phi (c - phi)^b = a on
/// either side of its peak c/(b+1).
inline Critical critical(const Wave& w) {
  const double peak = w.c / (w.b + 1.0);
  auto g = [&](double phi) { return phi * std::pow(w.c - phi, w.b) - w.a; };
  return {bisect(g, 0.0, peak), bisect(g, peak, w.c)};
}

struct Turning {
  double lo, hi;
};

inline Turning turning(const Wave& w) {
  const Critical cp = critical(w);
  auto f = [&](double phi) { return w.E - potential(w, phi); };
  // E - V is positive at the well bottom, negative at the hump phi1 and
  // negative next to the pole at c.
  return {bisect(f, cp.phi1, cp.phi2), bisect(f, cp.phi2, w.c * (1.0 - 1e-14))};
}

/// Period by shooting phi'' = phi - a/(c - phi)^b from the crest with
/// phi' = 0 until phi' vanishes again at the trough; the half period is
/// doubled.
inline double period_by_shooting(const Wave& w) {
  using namespace boost::numeric::odeint;
  using State = std::array<double, 2>;
  const Turning tp = turning(w);
  auto rhs = [&](const State& y, State& dy, double) {
    dy[0] = y[1];
    dy[1] = force(w, y[0]);
  };
  auto stepper = make_dense_output(1e-13, 1e-13, runge_kutta_dopri5<State>());
  stepper.initialize(State{tp.hi, 0.0}, 0.0, 1e-3);
  bool moved = false;
  for (int it = 0; it < 10000000; ++it) {
    stepper.do_step(rhs);
    const State y = stepper.current_state();
    if (y[1] < 0.0) moved = true;
    if (moved && y[1] >= 0.0) {
      double lo = stepper.previous_time(), hi = stepper.current_time();
      State tmp;
      for (int k = 0; k < 200 && hi - lo > 1e-16 * hi; ++k) {
        const double mid = 0.5 * (lo + hi);
        stepper.calc_state(mid, tmp);
        (tmp[1] < 0.0 ? lo : hi) = mid;
      }
      return lo + hi;
    }
  }
  throw std::runtime_error("period_by_shooting: trough not reached");
}

/// Discrete Fourier coefficients by direct summation, c_k for k in
/// [-n/2, n/2), stored at index k + n/2.
inline std::vector<std::complex<double>> naive_dft(const std::vector<double>& f) {
  const std::size_t n = f.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double k = static_cast<double>(idx) - static_cast<double>(n / 2);
    std::complex<double> s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      s += f[j] * std::polar(1.0, -2.0 * std::numbers::pi * k * static_cast<double>(j) /
                                      static_cast<double>(n));
    }
    out[idx] = s / static_cast<double>(n);
  }
  return out;
}

struct ShiftFit {
  double rho, x0;
};

/// min over s of ||m - mu(. - s)||_{H^1} by a scan over 4n shifts followed by
/// a parabolic fit of rho^2 through the best scan point and its neighbours.
/// The Nyquist mode is left out so the distance is a smooth function of s.
inline ShiftFit brute_force_shift(const std::vector<double>& m, const std::vector<double>& mu,
                                  double period) {
  const std::size_t n = m.size();
  const auto M = naive_dft(m);
  const auto U = naive_dft(mu);
  auto dist2 = [&](double s) {
    double acc = 0.0;
    for (std::size_t idx = 1; idx < n; ++idx) {
      const double k = 2.0 * std::numbers::pi * (static_cast<double>(idx) - static_cast<double>(n / 2)) / period;
      const auto d = M[idx] - U[idx] * std::polar(1.0, -k * s);
      acc += (1.0 + k * k) * std::norm(d);
    }
    return acc * period;
  };
  const std::size_t scan = 4 * n;
  const double ds = period / static_cast<double>(scan);
  std::size_t best = 0;
  double best_val = dist2(0.0);
  for (std::size_t i = 1; i < scan; ++i) {
    const double v = dist2(ds * static_cast<double>(i));
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double s0 = ds * static_cast<double>(best);
  const double fm = dist2(s0 - ds), f0 = best_val, fp = dist2(s0 + ds);
  const double denom = fm - 2.0 * f0 + fp;
  const double off = denom > 0.0 ? 0.5 * ds * (fm - fp) / denom : 0.0;
  double s = s0 + off;
  s -= period * std::floor(s / period);
  return {std::sqrt(std::max(dist2(s), 0.0)), s};
}

/// Sampler for admissible parameters away from the peaked limit: b from the
/// list, a = fa a_max(b, c) and E = V(phi2) + s (V(phi1) - V(phi2)).
struct SamplePoint {
  Wave w;
  double a_fraction, e_fraction;
};

inline std::vector<SamplePoint> sample_points(std::size_t count, unsigned seed,
                                              double fa_lo = 0.2, double fa_hi = 0.9,
                                              double s_lo = 0.1, double s_hi = 0.8) {
  std::mt19937_64 rng(seed);
  const double bs[] = {1.5, 2.0, 2.5, 3.0, 4.0};
  std::uniform_int_distribution<int> pick(0, 4);
  std::uniform_real_distribution<double> fa(fa_lo, fa_hi), fs(s_lo, s_hi), fc(0.5, 2.0);
  std::vector<SamplePoint> out;
  for (std::size_t i = 0; i < count; ++i) {
    Wave w{bs[pick(rng)], 0.0, 0.0, fc(rng)};
    const double af = fa(rng), s = fs(rng);
    w.a = af * std::pow(w.b, w.b) * std::pow(w.c, w.b + 1.0) / std::pow(w.b + 1.0, w.b + 1.0);
    const Critical cp = critical(w);
    const double v1 = potential(w, cp.phi1), v2 = potential(w, cp.phi2);
    w.E = v2 + s * (v1 - v2);
    out.push_back({w, af, s});
  }
  return out;
}

}  // namespace oracle
