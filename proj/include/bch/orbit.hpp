#pragma once

// Quadrature representation of one periodic orbit of
//
//   phi'' = phi - a/(c-phi)^b,      (phi')^2/2 + V(phi) = E.
//
// The orbit is parameterized by theta in [0, pi) through
//   phi(theta) = phi_max - (phi_max - phi_min) sin^2(theta),
// which removes the square-root singularities at both turning points:
//   dx/dtheta = h(theta) = sqrt(2 / G(phi)),
//   G(phi)    = (E - V(phi)) / ((phi - phi_min)(phi_max - phi)) > 0.
// h is smooth, even and pi-periodic, so the trapezoid rule in theta converges
// geometrically and x(theta) has a closed-form Fourier series. x = 0 is the
// crest (phi = phi_max) and x = T/2 the trough.

#include <cstddef>
#include <vector>

#include "bch/potential.hpp"

namespace bch {

/// Profile and momentum density at one point of the orbit.
struct OrbitPoint {
  double phi = 0.0;
  double dphi = 0.0;
  double d2phi = 0.0;
  double mu = 0.0;
  double dmu = 0.0;
  double d2mu = 0.0;
  double d3mu = 0.0;
};

struct QuadratureSettings {
  std::size_t min_nodes = 64;
  std::size_t max_nodes = std::size_t{1} << 20;
  /// Stop doubling once the period changes by less than this (relative).
  double rel_tol = 1e-13;
};

/// Turning points of the orbit: the two roots of E - V = 0 that bracket the
/// well bottom phi2. Throws Error(NotInExistenceSet) outside the existence
/// region or within 1e-12 of its E-boundary.
struct TurningPoints {
  double phi_min = 0.0;
  double phi_max = 0.0;
};
TurningPoints turning_points(const WaveParameters& params);

class WaveOrbit {
 public:
  /// Throws NotInExistenceSet, QuadratureFailure or ConvergenceFailure.
  static WaveOrbit build(const WaveParameters& params, const QuadratureSettings& settings = {});

  [[nodiscard]] const WaveParameters& params() const noexcept { return params_; }
  [[nodiscard]] const PotentialScan& scan() const noexcept { return scan_; }
  [[nodiscard]] double phi_min() const noexcept { return phi_min_; }
  [[nodiscard]] double phi_max() const noexcept { return phi_max_; }
  [[nodiscard]] double period() const noexcept { return period_; }
  [[nodiscard]] std::size_t nodes() const noexcept { return h_nodes_.size(); }
  [[nodiscard]] std::size_t series_terms() const noexcept { return coeffs_.size(); }

  /// dx/dtheta.
  [[nodiscard]] double h(double theta) const;
  /// Arc position x(theta), x(0) = 0, x(pi) = T.
  [[nodiscard]] double x_of_theta(double theta) const;
  /// Inverse of x_of_theta for x reduced modulo the period.
  [[nodiscard]] double theta_of_x(double x) const;

  [[nodiscard]] OrbitPoint at_theta(double theta) const;
  /// Periodic: any real x.
  [[nodiscard]] OrbitPoint at(double x) const;

  /// integral over one period of f(OrbitPoint) dx, by the theta trapezoid rule
  /// on the quadrature nodes.
  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < h_nodes_.size(); ++i) s += f(node_points_[i]) * h_nodes_[i];
    return 3.14159265358979323846 * s / static_cast<double>(h_nodes_.size());
  }

 private:
  WaveOrbit() = default;
  void tabulate(std::size_t nodes);

  WaveParameters params_{};
  PotentialScan scan_{};
  double phi_min_ = 0.0;
  double phi_max_ = 0.0;
  double period_ = 0.0;
  double noise_ = 0.0;  ///< relative rounding level of the tabulated h
  std::vector<double> h_nodes_;
  std::vector<OrbitPoint> node_points_;
  /// h(theta) = c0 + 2 sum_k coeffs_[k-1] cos(2 k theta)
  double c0_ = 0.0;
  std::vector<double> coeffs_;
};

}  // namespace bch
