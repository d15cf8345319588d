#include "bch/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "bch/error.hpp"
#include "roots.hpp"

namespace bch {

namespace {

void require_below_speed(double phi, const WaveParameters& p) {
  if (!(phi < p.c)) {
    std::ostringstream os;
    os << "phi = " << phi << " must be strictly below c = " << p.c;
    throw Error(ErrorKind::Domain, os.str());
  }
}

bool all_finite(const WaveParameters& p) {
  return std::isfinite(p.b) && std::isfinite(p.a) && std::isfinite(p.E) && std::isfinite(p.c);
}

// Small-denominator fractions (4/27 at b = 2, c = 1) read better in
// diagnostics than their decimal expansion.
std::string format_bound(double v) {
  for (std::int64_t q = 1; q <= 100000; ++q) {
    const double num = std::round(v * static_cast<double>(q));
    if (std::abs(num - v * static_cast<double>(q)) <= 1e-12 * static_cast<double>(q) * std::abs(v)) {
      if (q == 1) return std::to_string(static_cast<std::int64_t>(num));
      return std::to_string(static_cast<std::int64_t>(num)) + "/" + std::to_string(q);
    }
  }
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

double positive_pow(double x, double b) { return std::exp(b * std::log(x)); }

double a_max(double b, double c) {
  // b^b c^(b+1) / (b+1)^(b+1)
  return std::exp(b * std::log(b) + (b + 1.0) * std::log(c) - (b + 1.0) * std::log(b + 1.0));
}

double eval_potential(double phi, const WaveParameters& p) {
  require_below_speed(phi, p);
  return -0.5 * phi * phi + p.a / ((p.b - 1.0) * positive_pow(p.c - phi, p.b - 1.0));
}

double eval_potential_slope(double phi, const WaveParameters& p) {
  require_below_speed(phi, p);
  return -phi + p.a / positive_pow(p.c - phi, p.b);
}

double eval_g(double phi, const WaveParameters& p) {
  require_below_speed(phi, p);
  return phi * positive_pow(p.c - phi, p.b) - p.a;
}

double potential_secant(double u, double w, const WaveParameters& p) {
  const double d = u - w;
  const double U = p.c - u;
  if (d == 0.0) return -u + p.a / positive_pow(U, p.b);
  // (c-u)^(1-b) - (c-w)^(1-b) = -U^(1-b) expm1((1-b) log1p(d/U))
  const double rel = std::expm1((1.0 - p.b) * std::log1p(d / U)) / d;
  return -0.5 * (u + w) - p.a / (p.b - 1.0) * positive_pow(U, 1.0 - p.b) * rel;
}

PotentialScan critical_points(const WaveParameters& p) {
  if (!all_finite(p) || !(p.b > 1.0) || !(p.c > 0.0)) {
    throw Error(ErrorKind::NotInExistenceSet, "requires finite parameters with b > 1 and c > 0");
  }
  const double amax = a_max(p.b, p.c);
  if (!(p.a > 0.0 && p.a < amax)) {
    const std::string msg = "a outside (0, " + format_bound(amax) + ")";
    throw Error(ErrorKind::NotInExistenceSet, msg);
  }
  const double peak = p.c / (p.b + 1.0);
  const double edge = 1e-14 * p.c;
  auto g = [&](double phi) { return phi * positive_pow(p.c - phi, p.b) - p.a; };

  PotentialScan scan;
  scan.a_max = amax;
  scan.phi1 = detail::bracketed_root(g, edge, peak);
  scan.phi2 = detail::bracketed_root(g, peak, p.c - edge);
  scan.V_phi1 = eval_potential(scan.phi1, p);
  scan.V_phi2 = eval_potential(scan.phi2, p);
  scan.margin = std::min({p.a, amax - p.a, p.E - scan.V_phi2, scan.V_phi1 - p.E});
  return scan;
}

ExistenceResult existence_check(const WaveParameters& p) {
  ExistenceResult out;
  if (!all_finite(p)) {
    out.reason = "parameters must be finite";
    return out;
  }
  if (!(p.b > 1.0)) {
    out.reason = "b must exceed 1";
    return out;
  }
  if (!(p.c > 0.0)) {
    out.reason = "c must be positive";
    return out;
  }
  const double amax = a_max(p.b, p.c);
  if (!(p.a > 0.0 && p.a < amax)) {
    const std::string msg = "a outside (0, " + format_bound(amax) + ")";
    out.reason = msg;
    return out;
  }
  out.scan = critical_points(p);
  const auto& s = *out.scan;
  if (!(p.E > s.V_phi2 && p.E < s.V_phi1)) {
    std::ostringstream os;
    os.precision(17);
    os << "E outside (V(phi2), V(phi1)) = (" << s.V_phi2 << ", " << s.V_phi1 << ")";
    out.reason = os.str();
    return out;
  }
  out.admissible = true;
  return out;
}

}  // namespace bch
