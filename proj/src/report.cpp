#include "bch/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace bch {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json gradient(const Gradient& g) { return json::array({g[0], g[1], g[2]}); }

}  // namespace

void to_json(json& j, const WaveParameters& p) {
  j = json{{"b", p.b}, {"a", p.a}, {"E", p.E}, {"c", p.c}};
}

void to_json(json& j, const PotentialScan& s) {
  j = json{{"phi1", s.phi1},     {"phi2", s.phi2},     {"a_max", s.a_max},
           {"V_phi1", s.V_phi1}, {"V_phi2", s.V_phi2}, {"margin", s.margin}};
}

void to_json(json& j, const ProfileResiduals& r) {
  j = json{{"energy", r.energy},
           {"first_integral", r.first_integral},
           {"mu_relation", r.mu_relation},
           {"third_order_ode", r.third_order_ode}};
}

void to_json(json& j, const ConservedQuantities& q) {
  j = json{{"F1", q.F1},
           {"F2", q.F2},
           {"F1_grid", q.F1_grid},
           {"F2_grid", q.F2_grid},
           {"max_rel_route_gap", q.max_rel_route_gap}};
}

void to_json(json& j, const Multipliers& m) {
  j = json{{"omega1", m.omega1},
           {"omega2", m.omega2},
           {"grad_omega1", gradient(m.grad_omega1)},
           {"grad_omega2", gradient(m.grad_omega2)}};
}

void to_json(json& j, const JacobianReport& r) {
  const InvariantSet& s = r.invariants;
  j = json{
      {"T", s.T},
      {"F1", s.F1},
      {"F2", s.F2},
      {"omega1", s.omega1},
      {"omega2", s.omega2},
      {"grad_T", gradient(s.grad_T)},
      {"grad_F1", gradient(s.grad_F1)},
      {"grad_F2", gradient(s.grad_F2)},
      {"grad_omega1", gradient(s.grad_omega1)},
      {"grad_omega2", gradient(s.grad_omega2)},
      {"J_T_omega1", r.J_T_omega1},
      {"J_T_F1", r.J_T_F1},
      {"J3", r.J3},
      {"product", r.product},
      {"theta", r.theta},
      {"mu_plus", r.mu_plus},
      {"mu_xx0", r.mu_xx0},
      {"J_mu_plus_omega1", r.J_mu_plus_omega1},
      {"fd_steps", gradient(r.fd_steps)},
      {"fd_error_estimate",
       json{{"J_T_omega1", r.fd_error.J_T_omega1},
            {"J_T_F1", r.fd_error.J_T_F1},
            {"J3", r.fd_error.J3},
            {"product", r.fd_error.product}}},
      {"fd_reliable", r.fd_reliable},
      {"classification", std::string(to_string(r.classification))},
  };
}

void to_json(json& j, const AppendixReport& r) {
  j = json{{"phi_plus", r.phi_plus},
           {"phi_xx0", r.d2phi0},
           {"mu_plus", r.mu_plus},
           {"mu_xx0", r.mu_xx0},
           {"dphi_dE", r.dphi_dE},
           {"dphi_dE_closed", r.dphi_dE_closed},
           {"dphi_dc", r.dphi_dc},
           {"dphi_dc_closed", r.dphi_dc_closed},
           {"combination", r.combo},
           {"combination_closed", r.combo_closed},
           {"J_mu_plus_omega1", r.J_mu_omega},
           {"J_mu_plus_omega1_closed", r.J_mu_omega_closed},
           {"rel_residuals", json::array({r.rel_residuals[0], r.rel_residuals[1],
                                          r.rel_residuals[2], r.rel_residuals[3]})},
           {"mu_xx0_negative", r.mu_xx0_negative},
           {"J_mu_plus_omega1_positive", r.J_mu_omega_positive}};
}

void to_json(json& j, const SpectralReport& r) {
  j = json{{"modes", r.modes},
           {"n_neg", r.n_neg},
           {"n_zero", r.n_zero},
           {"n_pos", r.n_pos},
           {"tau", r.tau},
           {"kernel_residual", r.kernel_residual},
           {"convergence_shift", r.convergence_shift},
           {"lowest_eigenvalues",
            json(std::vector<double>(r.eigenvalues.begin(),
                                     r.eigenvalues.begin() +
                                         static_cast<std::ptrdiff_t>(
                                             std::min<std::size_t>(8, r.eigenvalues.size()))))}};
}

void to_json(json& j, const ProofIdentities& r) {
  j = json{{"muE_residual", r.muE_residual},
           {"muc_residual", r.muc_residual},
           {"mua_residual", r.mua_residual},
           {"psi_quadratic_hessian", r.psi_quadratic},
           {"psi_quadratic_sturm_liouville", r.psi_quadratic_sl},
           {"psi_predicted", r.psi_predicted},
           {"psi_identity_residual", r.psi_identity_residual},
           {"tangent_max", r.tangent_max}};
}

void to_json(json& j, const CoercivityResult& r) {
  j = json{{"trials", r.trials},
           {"min_constrained", r.min_constrained},
           {"min_unconstrained", r.min_unconstrained},
           {"negative_unconstrained", r.negative_unconstrained},
           {"kernel_quotient", r.kernel_quotient},
           {"constrained_min_eigenvalue", r.constrained_min_eigenvalue}};
}

void to_json(json& j, const StabilityBundle& b) {
  j = json{{"params", b.params},
           {"scan", b.scan},
           {"T", b.T},
           {"profile_residuals", b.residuals},
           {"conserved", b.conserved},
           {"multipliers", b.multipliers},
           {"euler_lagrange_residual", b.el_residual},
           {"jacobians", b.jacobians},
           {"appendix", b.appendix},
           {"operator",
            json{{"p_min", b.op.p_min},
                 {"self_adjoint_gap", b.op.self_adjoint_gap},
                 {"printed_q_over_p_prime", b.op.printed_q_ratio}}},
           {"spectrum", b.spectrum},
           {"theta_monodromy", b.theta_monodromy},
           {"classification", std::string(to_string(b.classification))}};
  if (b.proof) j["proof_identities"] = *b.proof;
  if (b.gradient_identity) {
    const auto& g = *b.gradient_identity;
    j["gradient_identity_residuals"] = json{{"F1", gradient(g[0])}, {"F2", gradient(g[1])}};
  }
  if (b.coercivity) j["coercivity"] = *b.coercivity;
}

void to_json(json& j, const RunDiagnostics& d) {
  j = json{{"eps", d.eps},
           {"max_rho", d.max_rho},
           {"ratio", d.ratio},
           {"initial_rho", d.initial_rho},
           {"max_E_drift", d.max_E_drift},
           {"max_F1_drift", d.max_F1_drift},
           {"max_F2_drift", d.max_F2_drift},
           {"dt", d.dt},
           {"steps", d.steps},
           {"samples", d.times.size()},
           {"final_time", d.times.empty() ? 0.0 : d.times.back()}};
  if (d.aborted) {
    j["aborted"] = std::string(to_string(*d.aborted));
    j["abort_message"] = d.abort_message;
  }
}

void write_profile_csv(std::ostream& os, const WaveProfile& p) {
  os << "# T=" << format_double(p.T) << " N=" << p.N << " b=" << format_double(p.params.b)
     << " a=" << format_double(p.params.a) << " E=" << format_double(p.params.E)
     << " c=" << format_double(p.params.c) << '\n';
  os << "x,phi,dphi,d2phi,mu,dmu,d2mu\n";
  for (std::size_t i = 0; i < p.N; ++i) {
    os << format_double(p.x[i]) << ',' << format_double(p.phi[i]) << ','
       << format_double(p.dphi[i]) << ',' << format_double(p.d2phi[i]) << ','
       << format_double(p.mu[i]) << ',' << format_double(p.dmu[i]) << ','
       << format_double(p.d2mu[i]) << '\n';
  }
}

void write_eigenvalues_csv(std::ostream& os, const SpectralReport& r) {
  os << "index,eigenvalue\n";
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    os << i << ',' << format_double(r.eigenvalues[i]) << '\n';
  }
}

void write_diagnostics_csv(std::ostream& os, const RunDiagnostics& d) {
  os << "t,E_drift,F1_drift,F2_drift,rho\n";
  for (std::size_t i = 0; i < d.times.size(); ++i) {
    os << format_double(d.times[i]) << ',' << format_double(d.E_drift[i]) << ','
       << format_double(d.F1_drift[i]) << ',' << format_double(d.F2_drift[i]) << ','
       << format_double(d.rho[i]) << '\n';
  }
}

}  // namespace bch
