#pragma once

// Conserved quantities restricted to the wave family, the Lagrange multipliers
// that make the momentum density a critical point of
//   Lambda(m) = E(m) - omega1 F1(m) - omega2 F2(m),
// and the Jacobian determinants that decide the stability criteria.
//
// Parameter vectors are ordered (a, E, c) throughout.

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "bch/orbit.hpp"
#include "bch/potential.hpp"
#include "bch/profile.hpp"

namespace bch {

using Gradient = std::array<double, 3>;

enum class Param : int { A = 0, E = 1, C = 2 };

struct Multipliers {
  double omega1 = 0.0;
  double omega2 = 0.0;
  Gradient grad_omega1{};
  Gradient grad_omega2{};
};

/// Closed forms; throws Error(Domain) unless a > 0 and b > 1.
Multipliers multipliers(const WaveParameters& params);

struct ConservedQuantities {
  double F1 = 0.0;  ///< returned value (theta route)
  double F2 = 0.0;
  double F1_grid = 0.0;  ///< trapezoid on the profile grid
  double F2_grid = 0.0;
  double max_rel_route_gap = 0.0;
};

/// F1 = int mu^(1/b) dx and F2 = int (mu_x^2/(b^2 mu^2) + 1) mu^(-1/b) dx over one
/// period, by two quadrature routes. Throws RouteMismatch beyond 1e-5.
ConservedQuantities conserved_quantities(const WaveProfile& profile);

struct OrbitInvariants {
  double T = 0.0;
  double F1 = 0.0;
  double F2 = 0.0;
  double mass = 0.0;  ///< E(m) = int mu dx
};
OrbitInvariants orbit_invariants(const WaveOrbit& orbit);

/// Variational derivatives of F1 and F2 at a positive density.
double dF1_dm(double b, double m);
double dF2_dm(double b, double m, double mx, double mxx);
/// Densities f_j with F_j = int f_j dx.
double F1_density(double b, double m);
double F2_density(double b, double m, double mx);

/// sup over the grid of |dLambda/dm (mu)|.
double euler_lagrange_residual(const WaveProfile& profile, const Multipliers& mult);

struct FdConfig {
  double rel_step = 1e-5;       ///< step relative to the parameter scale
  double margin_divisor = 20.0; ///< steps never exceed margin / margin_divisor
  double min_margin = 1e-9;     ///< below this the stencil is refused
};

/// Per-parameter central-difference steps.
Gradient fd_steps(const WaveParameters& params, const PotentialScan& scan, const FdConfig& cfg);

enum class Classification {
  StableCriteriaMet,
  TrichotomyCase_ii,
  TwoNegativeDirections,
  ProductSignFail,
  Indeterminate,
  OutOfScope,
};
std::string_view to_string(Classification c) noexcept;

struct InvariantSet {
  double T = 0.0;
  double F1 = 0.0;
  double F2 = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  Gradient grad_T{};
  Gradient grad_F1{};
  Gradient grad_F2{};
  Gradient grad_omega1{};
  Gradient grad_omega2{};
  /// Richardson error estimates of the FD gradients.
  Gradient err_T{};
  Gradient err_F1{};
  Gradient err_F2{};
};

struct JacobianReport {
  InvariantSet invariants;
  double J_T_omega1 = 0.0;  ///< {T, omega1}_{E,c}
  double J_T_F1 = 0.0;      ///< {T, F1}_{E,c}
  double J3 = 0.0;          ///< {T, F1, F2}_{a,E,c}
  double product = 0.0;     ///< J_T_F1 * J3
  double theta = 0.0;       ///< monodromy coefficient -mu_xx(0) {T,omega1}/{mu+,omega1}
  double mu_plus = 0.0;
  double mu_xx0 = 0.0;
  double J_mu_plus_omega1 = 0.0;  ///< {mu+, omega1}_{E,c}
  Gradient fd_steps{};
  struct Errors {
    double J_T_omega1 = 0.0;
    double J_T_F1 = 0.0;
    double J3 = 0.0;
    double product = 0.0;
  } fd_error;
  bool fd_reliable = true;
  Classification classification = Classification::Indeterminate;
};

/// Decision rule for the two sign conditions. The product condition is
/// stated for the Sturm-Liouville normalization with positive leading
/// coefficient: the constrained quadratic form is coercive when
/// <L psi, psi> = -(omega2)_a {T,F1}_{E,c} {T,F1,F2}_{a,E,c} / 2 < 0.
Classification classify(double J_T_omega1, double err_T_omega1, double product,
                        double err_product, bool fd_reliable);

/// Central differences with one Richardson step (h and h/2) on T, F1, F2 and
/// the crest density mu+. Throws MarginTooSmall if the stencil leaves the
/// existence set.
JacobianReport parameter_jacobians(const WaveParameters& params, const FdConfig& cfg = {});

struct AppendixReport {
  double phi_plus = 0.0;
  double d2phi0 = 0.0;
  double mu_plus = 0.0;
  double mu_xx0 = 0.0;
  double dphi_dE = 0.0;        ///< FD
  double dphi_dE_closed = 0.0; ///< -1/phi''(0)
  double dphi_dc = 0.0;
  double dphi_dc_closed = 0.0; ///< -mu+/phi''(0)
  double combo = 0.0;          ///< c dphi/dE - dphi/dc + 1 (FD)
  double combo_closed = 0.0;   ///< -(c - phi+)/phi''(0)
  double J_mu_omega = 0.0;     ///< {mu+, omega1}_{E,c} (FD)
  double J_mu_omega_closed = 0.0;
  std::array<double, 4> rel_residuals{};  ///< identities (i)..(iv)
  bool mu_xx0_negative = false;
  bool J_mu_omega_positive = false;
};

AppendixReport appendix_identities(const WaveParameters& params, const FdConfig& cfg = {});

/// FD parameter derivatives of the sampled density on the base grid
/// x_j = j T_base / N (crest pinned at x = 0), together with the FD gradients
/// of T, F1, F2.
struct FamilyDerivatives {
  WaveProfile base;
  std::array<std::vector<double>, 3> mu_p;    ///< d mu / dp
  std::array<std::vector<double>, 3> mux_p;   ///< d mu_x / dp
  std::array<std::vector<double>, 3> muxx_p;  ///< d mu_xx / dp
  std::array<double, 3> max_rel_error{};      ///< Richardson estimate per parameter
  Gradient grad_T{};
  Gradient grad_F1{};
  Gradient grad_F2{};
  Gradient steps{};
};

FamilyDerivatives family_derivatives(const WaveParameters& params, std::size_t N,
                                     const FdConfig& cfg = {});

/// Residuals of  int dF_j/dm(mu) d mu/dp dx = dF_j/dp - f_j(0) dT/dp,
/// indexed [j][p], relative to max(|dF_j/dp|, 1).
std::array<Gradient, 2> variational_gradient_identity(const FamilyDerivatives& fam);

}  // namespace bch
