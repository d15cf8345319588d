#include "bch/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bch/error.hpp"
#include "bch/fourier.hpp"
#include "roots.hpp"

namespace bch {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 2.220446049250313e-16;

// (V(u) - V(u - d)) / d for d > 0 without cancellation in d. The two terms
// still cancel near the well bottom; *scale receives their size so callers
// can bound the rounding error.
double secant_down(double u, double d, const WaveParameters& p, double* scale) {
  const double U = p.c - u;
  const double rel = d == 0.0 ? (1.0 - p.b) / U  // limit of the expression below
                              : std::expm1((1.0 - p.b) * std::log1p(d / U)) / d;
  const double lin = -(u - 0.5 * d);
  const double pole = -p.a / (p.b - 1.0) * positive_pow(U, 1.0 - p.b) * rel;
  *scale = std::abs(lin) + std::abs(pole);
  return lin + pole;
}

// (V(w) - V(u)) / d with w = u + d, d > 0.
double secant_up(double u, double d, const WaveParameters& p, double* scale) {
  const double U = p.c - u;
  const double rel = d == 0.0 ? (1.0 - p.b) / U
                              : std::expm1((1.0 - p.b) * std::log1p(-d / U)) / (-d);
  const double lin = -(u + 0.5 * d);
  const double pole = -p.a / (p.b - 1.0) * positive_pow(U, 1.0 - p.b) * rel;
  *scale = std::abs(lin) + std::abs(pole);
  return lin + pole;
}

}  // namespace

TurningPoints turning_points(const WaveParameters& p) {
  const ExistenceResult ex = existence_check(p);
  if (!ex.admissible) throw Error(ErrorKind::NotInExistenceSet, ex.reason);
  const PotentialScan& s = *ex.scan;
  if (std::min(p.E - s.V_phi2, s.V_phi1 - p.E) < 1e-12) {
    throw Error(ErrorKind::NotInExistenceSet, "E within 1e-12 of the boundary of the existence set");
  }
  auto f = [&](double phi) { return p.E - eval_potential(phi, p); };
  TurningPoints tp;
  tp.phi_min = detail::bracketed_root(f, s.phi1, s.phi2);
  tp.phi_max = detail::bracketed_root(f, s.phi2, p.c - 1e-14 * p.c);
  return tp;
}

WaveOrbit WaveOrbit::build(const WaveParameters& params, const QuadratureSettings& settings) {
  WaveOrbit orbit;
  orbit.params_ = params;
  const TurningPoints tp = turning_points(params);
  orbit.scan_ = critical_points(params);
  orbit.phi_min_ = tp.phi_min;
  orbit.phi_max_ = tp.phi_max;

  std::size_t k = std::max<std::size_t>(settings.min_nodes, 16);
  orbit.tabulate(k);
  double previous = orbit.period_;
  for (;;) {
    if (2 * k > settings.max_nodes) {
      std::ostringstream os;
      os << "period quadrature did not converge with " << k << " nodes";
      throw Error(ErrorKind::ConvergenceFailure, os.str());
    }
    k *= 2;
    orbit.tabulate(k);
    const double change = std::abs(orbit.period_ - previous);
    previous = orbit.period_;
    // geometric convergence: also require the coefficient tail to have decayed
    double tail = 0.0;
    for (std::size_t j = orbit.coeffs_.size() / 2; j < orbit.coeffs_.size(); ++j)
      tail = std::max(tail, std::abs(orbit.coeffs_[j]));
    // Close to the well bottom the weights carry rounding noise above rel_tol;
    // the doubling then stops at that floor instead of running away.
    const double floor = 16.0 * orbit.noise_;
    if (change <= std::max(settings.rel_tol, floor) * orbit.period_ &&
        tail <= std::max(1e-15, floor) * orbit.c0_)
      break;
  }
  // trim negligible high-order terms
  std::size_t keep = orbit.coeffs_.size();
  while (keep > 0 && std::abs(orbit.coeffs_[keep - 1]) < 1e-18 * orbit.c0_) --keep;
  orbit.coeffs_.resize(keep);
  return orbit;
}

void WaveOrbit::tabulate(std::size_t nodes) {
  double noise = 0.0;
  h_nodes_.resize(nodes);
  node_points_.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double theta = kPi * static_cast<double>(i) / static_cast<double>(nodes);
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double delta = phi_max_ - phi_min_;
    const double below_top = delta * s * s;
    const double above_bottom = delta * c * c;
    const double phi = phi_max_ - below_top;
    double G, scale, num;
    if (above_bottom >= below_top) {
      num = secant_down(phi_max_, below_top, params_, &scale);
      G = num / above_bottom;
    } else {
      num = -secant_up(phi_min_, above_bottom, params_, &scale);
      G = num / below_top;
    }
    // h = sqrt(2/G) inherits half the relative rounding error of the secant.
    noise = std::max(noise, 0.5 * kEps * scale / std::abs(num));
    if (!(G > 0.0) || !std::isfinite(G)) {
      std::ostringstream os;
      os << "non-positive or non-finite quadrature weight at theta = " << theta << " (phi = " << phi
         << ")";
      throw Error(ErrorKind::QuadratureFailure, os.str());
    }
    h_nodes_[i] = std::sqrt(2.0 / G);
  }
  noise_ = noise;

  const auto X = fourier_coefficients(h_nodes_);
  c0_ = X[0].real();
  // drop the Nyquist term; its antiderivative is ambiguous on the node set
  const std::size_t terms = nodes / 2 - 1;
  coeffs_.resize(terms);
  for (std::size_t k = 0; k < terms; ++k) coeffs_[k] = X[k + 1].real();
  period_ = kPi * c0_;

  for (std::size_t i = 0; i < nodes; ++i) {
    node_points_[i] = at_theta(kPi * static_cast<double>(i) / static_cast<double>(nodes));
  }
}

namespace {

// Accumulates sum_k a_k cos(k alpha) and sum_k a_k sin(k alpha) / k with
// rotation recurrences, reseeded periodically to bound the drift.
struct SeriesSums {
  double cos_sum = 0.0;
  double sin_over_k = 0.0;
};

SeriesSums series_sums(const std::vector<double>& a, double alpha) {
  SeriesSums out;
  const double c1 = std::cos(alpha);
  const double s1 = std::sin(alpha);
  double ck = c1;
  double sk = s1;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double k = static_cast<double>(j + 1);
    if (j % 16 == 15) {
      ck = std::cos(k * alpha);
      sk = std::sin(k * alpha);
    }
    out.cos_sum += a[j] * ck;
    out.sin_over_k += a[j] * sk / k;
    const double cn = ck * c1 - sk * s1;
    const double sn = sk * c1 + ck * s1;
    ck = cn;
    sk = sn;
  }
  return out;
}

}  // namespace

double WaveOrbit::h(double theta) const {
  return c0_ + 2.0 * series_sums(coeffs_, 2.0 * theta).cos_sum;
}

double WaveOrbit::x_of_theta(double theta) const {
  return c0_ * theta + series_sums(coeffs_, 2.0 * theta).sin_over_k;
}

double WaveOrbit::theta_of_x(double x) const {
  double target = std::fmod(x, period_);
  if (target < 0.0) target += period_;
  double lo = 0.0;
  double hi = kPi;
  double theta = kPi * target / period_;
  for (int it = 0; it < 100; ++it) {
    const SeriesSums s = series_sums(coeffs_, 2.0 * theta);
    const double f = c0_ * theta + s.sin_over_k - target;
    const double df = c0_ + 2.0 * s.cos_sum;
    if (f > 0.0) hi = theta; else lo = theta;
    double next = theta - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - theta);
    theta = next;
    if (step <= 4e-16 * std::max(1.0, theta) || hi - lo <= 4e-16) break;
  }
  return theta;
}

OrbitPoint WaveOrbit::at_theta(double theta) const {
  const WaveParameters& p = params_;
  const double delta = phi_max_ - phi_min_;
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double below_top = delta * s * s;
  const double above_bottom = delta * c * c;
  double G, scale;
  if (above_bottom >= below_top) {
    G = secant_down(phi_max_, below_top, p, &scale) / above_bottom;
  } else {
    G = -secant_up(phi_min_, above_bottom, p, &scale) / below_top;
  }
  OrbitPoint pt;
  pt.phi = (above_bottom >= below_top) ? phi_max_ - below_top : phi_min_ + above_bottom;
  pt.dphi = -delta * s * c * std::sqrt(2.0 * G);
  const double gap = p.c - pt.phi;
  pt.mu = p.a / positive_pow(gap, p.b);
  pt.d2phi = pt.phi - pt.mu;

  // mu' = beta mu with beta = b phi'/(c - phi)
  const double beta = p.b * pt.dphi / gap;
  const double dbeta = p.b * pt.d2phi / gap + p.b * pt.dphi * pt.dphi / (gap * gap);
  pt.dmu = beta * pt.mu;
  pt.d2mu = (dbeta + beta * beta) * pt.mu;
  const double d3phi = pt.dphi - pt.dmu;
  const double d2beta = p.b * d3phi / gap + 3.0 * p.b * pt.dphi * pt.d2phi / (gap * gap) +
                        2.0 * p.b * pt.dphi * pt.dphi * pt.dphi / (gap * gap * gap);
  pt.d3mu = (d2beta + 3.0 * beta * dbeta + beta * beta * beta) * pt.mu;
  return pt;
}

OrbitPoint WaveOrbit::at(double x) const { return at_theta(theta_of_x(x)); }

}  // namespace bch
