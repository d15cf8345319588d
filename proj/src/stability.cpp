#include "bch/stability.hpp"

#include "bch/error.hpp"

namespace bch {

StabilityBundle classify_stability(const WaveParameters& params, const StabilityOptions& opts) {
  const ExistenceResult ex = existence_check(params);
  if (!ex.admissible) throw Error(ErrorKind::NotInExistenceSet, ex.reason);

  StabilityBundle out;
  out.params = params;
  out.scan = *ex.scan;

  const WaveOrbit orbit = WaveOrbit::build(params);
  const WaveProfile prof = sample_profile(orbit, opts.N);
  out.T = prof.T;
  out.residuals = profile_residuals(prof);
  out.conserved = conserved_quantities(prof);
  out.multipliers = multipliers(params);
  out.el_residual = euler_lagrange_residual(prof, out.multipliers);

  out.jacobians = parameter_jacobians(params, opts.fd);
  out.appendix = appendix_identities(params, opts.fd);

  const OperatorCoefficients op = assemble_operator(prof, out.multipliers);
  out.op = {op.p_min, op.self_adjoint_gap, op.printed_q_ratio};
  out.spectrum = periodic_spectrum(op, prof, opts.spectrum);
  out.theta_monodromy = monodromy_theta(orbit, out.multipliers);

  if (opts.proof_identities) {
    const FamilyDerivatives fam = family_derivatives(params, opts.N, opts.fd);
    out.proof = proof_identities(fam, op, out.jacobians);
    out.proof->psi.clear();
    out.gradient_identity = variational_gradient_identity(fam);
  }
  if (opts.coercivity_trials > 0) {
    out.coercivity = coercivity_probe(op, prof, opts.coercivity_trials, opts.seed);
  }
  out.classification = out.jacobians.classification;
  return out;
}

}  // namespace bch
