#pragma once

// Second variation of the action functional at the wave and its periodic
// spectrum.
//
// The operator is kept in the Sturm-Liouville normalization
//   L v = -p v'' - q v' - r v = -(p v')' + r_sym v,   q = p',  r_sym = -r,
// with p = omega2 / (b^2 mu^(2 + 1/b)) > 0. The Hessian of
// Lambda = E - omega1 F1 - omega2 F2 is H = -2 L; the parameter-derivative
// relations are stated for H (see hessian_scale).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bch/invariants.hpp"
#include "bch/orbit.hpp"
#include "bch/profile.hpp"

namespace bch {

/// H = hessian_scale * L.
inline constexpr double hessian_scale = -2.0;

/// Pointwise coefficients from mu, mu_x, mu_xx.
struct CoefficientPoint {
  double p = 0.0;
  double dp = 0.0;
  double r_sym = 0.0;
};
CoefficientPoint coefficients_at(double b, const Multipliers& w, double mu, double mux,
                                 double muxx);

struct OperatorCoefficients {
  double b = 0.0;
  double T = 0.0;
  std::size_t N = 0;
  std::vector<double> p;
  std::vector<double> q;            ///< p' (analytic)
  std::vector<double> r;            ///< -r_sym
  std::vector<double> symmetric_r;  ///< r_sym
  /// Alternative first-order coefficient -omega2 (2b+1) mu_x / (b mu^(3+1/b)),
  /// which equals b^2 p'. Kept for reporting only.
  std::vector<double> printed_q;
  double self_adjoint_gap = 0.0;  ///< sup|q - D p| / sup|q|, D spectral
  double printed_q_ratio = 0.0;   ///< printed_q / q where q is not tiny
  double p_min = 0.0;
};

/// Throws CoefficientInconsistency if q and the spectral derivative of p differ
/// by more than 1e-5 (relative), or if p is not positive.
OperatorCoefficients assemble_operator(const WaveProfile& profile, const Multipliers& w);

/// L v from samples of v and its first two derivatives.
std::vector<double> apply_operator(const OperatorCoefficients& op, const std::vector<double>& v,
                                   const std::vector<double>& vx, const std::vector<double>& vxx);

/// L v for periodic, resolved v (derivatives taken spectrally).
std::vector<double> apply_operator(const OperatorCoefficients& op, const std::vector<double>& v);

/// <L v, v> = int p v_x^2 + r_sym v^2 for periodic v.
double quadratic_form(const OperatorCoefficients& op, const std::vector<double>& v);

struct SpectrumOptions {
  /// Fourier modes |k| <= M; 0 selects N/4.
  std::size_t modes = 0;
  /// Lowest eigenvalues must move by less than this when M is halved.
  double convergence_tol = 1e-6;
  std::size_t convergence_count = 5;
};

struct SpectralReport {
  std::vector<double> eigenvalues;  ///< lowest M, ascending
  int n_neg = 0;
  int n_zero = 0;
  int n_pos = 0;
  double tau = 0.0;
  double kernel_residual = 0.0;   ///< ||L mu_x|| / ||mu_x|| (sup norms)
  double convergence_shift = 0.0; ///< max change of the lowest eigenvalues, M/2 -> M
  std::size_t modes = 0;
};

/// Hill's method on -(p v')' + r_sym v. Throws DiscretizationNotConverged.
SpectralReport periodic_spectrum(const OperatorCoefficients& op, const WaveProfile& profile,
                                 const SpectrumOptions& opts = {});

/// Eigenvalues of the Fourier-Galerkin matrix with |k| <= M (ascending).
std::vector<double> hill_eigenvalues(const OperatorCoefficients& op, std::size_t M);

struct ProofIdentities {
  double muE_residual = 0.0;  ///< ||H mu_E - (omega1)_E dF1|| / ||(omega1)_E dF1||, L2
  double muc_residual = 0.0;
  double mua_residual = 0.0;  ///< H mu_a = (omega1)_a dF1 + (omega2)_a dF2
  double psi_quadratic = 0.0; ///< <H psi, psi>
  double psi_predicted = 0.0; ///< (omega2)_a {T,F1}_{E,c} {T,F1,F2}_{a,E,c}
  double psi_identity_residual = 0.0;
  double psi_quadratic_sl = 0.0; ///< <L psi, psi> = psi_quadratic / hessian_scale
  double tangent_max = 0.0;      ///< max |<H psi, m>| / (||H psi|| ||m||), m in T0
  std::vector<double> psi;
};

ProofIdentities proof_identities(const FamilyDerivatives& fam, const OperatorCoefficients& op,
                                 const JacobianReport& jac, std::size_t tangent_trials = 32,
                                 std::uint64_t seed = 7);

struct CoercivityResult {
  std::size_t trials = 0;
  double min_constrained = 0.0;    ///< min <Lm,m>/||m||_H1^2 over projected trials
  double min_unconstrained = 0.0;  ///< same without projections
  std::size_t negative_unconstrained = 0;
  double kernel_quotient = 0.0;    ///< quotient of mu_x itself
  double constrained_min_eigenvalue = 0.0;  ///< H1-generalized, on the constrained space
};

/// Random smooth trial functions, L2-projected orthogonal to
/// {dF1/dm(mu), dF2/dm(mu), mu_x} for the constrained set.
CoercivityResult coercivity_probe(const OperatorCoefficients& op, const WaveProfile& profile,
                                  std::size_t trials, std::uint64_t seed = 12345,
                                  std::size_t modes = 0);

/// theta = y1'(T) for the even solution of L y = 0 with y1(0) = 1, y1'(0) = 0,
/// integrated along the orbit in the quadrature angle.
double monodromy_theta(const WaveOrbit& orbit, const Multipliers& w);

}  // namespace bch
