#pragma once

#include <cstddef>
#include <vector>

#include "bch/orbit.hpp"
#include "bch/potential.hpp"

namespace bch {

/// One period of the wave sampled on the uniform grid x_j = j T / N, with the
/// crest at x = 0 and the trough at x = T/2.
struct WaveProfile {
  WaveParameters params{};
  double T = 0.0;
  std::size_t N = 0;
  double phi_min = 0.0;
  double phi_max = 0.0;
  std::vector<double> x;
  std::vector<double> phi;
  std::vector<double> dphi;
  std::vector<double> d2phi;
  std::vector<double> mu;
  std::vector<double> dmu;
  std::vector<double> d2mu;
  std::vector<double> d3mu;
};

struct ProfileResiduals {
  double energy = 0.0;          ///< sup |(phi')^2/2 + V(phi) - E|
  double first_integral = 0.0;  ///< sup |(c-phi)(phi-phi'') + (b-1)/2 ((phi')^2 - phi^2) - (b-1)E|
  double mu_relation = 0.0;     ///< sup |mu - (phi - D^2 phi)|, D spectral
  double third_order_ode = 0.0; ///< sup |(phi-c) D(phi - D^2 phi) + b D(phi) (phi - D^2 phi)|
};

/// Period by the desingularized quadrature.
double period(const WaveParameters& params);

/// Requires N >= 64 and a power of two. Throws NotInExistenceSet,
/// ConvergenceFailure, QuadratureFailure, or Error(Domain) for a bad N.
WaveProfile synthesize_profile(const WaveParameters& params, std::size_t N);

/// Samples an already-built orbit; N only needs to be even.
WaveProfile sample_profile(const WaveOrbit& orbit, std::size_t N);

/// The constant state phi = phi2 (E = V(phi2)) on a grid of the given
/// period; the small-amplitude limit of the family.
WaveProfile equilibrium_profile(double b, double a, double c, std::size_t N, double period);

/// Harmonic period 2 pi / sqrt(V''(phi2)) of the well bottom.
double harmonic_period(double b, double a, double c);

ProfileResiduals profile_residuals(const WaveProfile& profile);

}  // namespace bch
