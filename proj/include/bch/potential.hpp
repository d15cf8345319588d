#pragma once

// Effective potential of the traveling-wave ODE and the existence region of
// smooth periodic waves with profile below the wave speed.
//
//   V(phi; a, c) = -phi^2/2 + a / ((b-1) (c-phi)^(b-1)),     phi < c
//   g(phi)       = phi (c-phi)^b - a,   V'(phi) = -g(phi) / (c-phi)^b
//
// For 0 < a < a_max(b, c) the root function g has exactly two zeros
// phi1 < c/(b+1) < phi2; V has its local max at phi1 and its well at phi2,
// and periodic orbits exist for V(phi2) < E < V(phi1).

#include <optional>
#include <string>

namespace bch {

/// The four wave parameters (b, a, E, c).
struct WaveParameters {
  double b = 2.0;
  double a = 0.1;
  double E = 0.09;
  double c = 1.0;
};

struct PotentialScan {
  double phi1 = 0.0;      ///< local max of V
  double phi2 = 0.0;      ///< local min of V (bottom of the well)
  double a_max = 0.0;
  double V_phi1 = 0.0;
  double V_phi2 = 0.0;
  /// min distance of a to {0, a_max} and of E to {V(phi2), V(phi1)}.
  double margin = 0.0;
};

struct ExistenceResult {
  bool admissible = false;
  std::string reason;                ///< empty when admissible
  std::optional<PotentialScan> scan; ///< present whenever both roots of g exist
};

/// (x)^b for x > 0 via exp(b ln x); valid for non-integer b.
double positive_pow(double x, double b);

double a_max(double b, double c);

/// V(phi; a, c). Throws Error(Domain) for phi >= c.
double eval_potential(double phi, const WaveParameters& params);

/// dV/dphi = -phi + a/(c-phi)^b. Throws Error(Domain) for phi >= c.
double eval_potential_slope(double phi, const WaveParameters& params);

/// g(phi) = phi (c-phi)^b - a. Throws Error(Domain) for phi >= c.
double eval_g(double phi, const WaveParameters& params);

/// Divided difference (V(u) - V(w)) / (u - w), accurate when u and w are close
/// (reduces to V'(u) when u == w).
double potential_secant(double u, double w, const WaveParameters& params);

/// Both roots of g. Throws Error(NotInExistenceSet) if a is not in (0, a_max)
/// or b <= 1, c <= 0.
PotentialScan critical_points(const WaveParameters& params);

/// Membership in the existence region; never throws.
ExistenceResult existence_check(const WaveParameters& params);

}  // namespace bch
