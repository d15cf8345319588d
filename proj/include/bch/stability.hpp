#pragma once

// End-to-end stability assessment of one wave: profile, invariants,
// Jacobian determinants, crest identities, operator spectrum and, optionally,
// the proof identities and a coercivity probe.

#include <array>
#include <cstddef>
#include <optional>

#include "bch/invariants.hpp"
#include "bch/potential.hpp"
#include "bch/profile.hpp"
#include "bch/spectral.hpp"

namespace bch {

struct StabilityOptions {
  std::size_t N = 512;
  SpectrumOptions spectrum{};
  FdConfig fd{};
  bool proof_identities = false;
  std::size_t coercivity_trials = 0;  ///< 0 skips the probe
  std::uint64_t seed = 12345;
};

struct OperatorSummary {
  double p_min = 0.0;
  double self_adjoint_gap = 0.0;
  double printed_q_ratio = 0.0;
};

struct StabilityBundle {
  WaveParameters params{};
  PotentialScan scan{};
  double T = 0.0;
  ProfileResiduals residuals{};
  ConservedQuantities conserved{};
  Multipliers multipliers{};
  double el_residual = 0.0;
  JacobianReport jacobians{};
  AppendixReport appendix{};
  OperatorSummary op{};
  SpectralReport spectrum{};
  double theta_monodromy = 0.0;
  std::optional<ProofIdentities> proof;
  std::optional<std::array<Gradient, 2>> gradient_identity;
  std::optional<CoercivityResult> coercivity;
  Classification classification = Classification::Indeterminate;
};

/// Throws the errors of the underlying steps (NotInExistenceSet,
/// MarginTooSmall, ConvergenceFailure, DiscretizationNotConverged, ...).
StabilityBundle classify_stability(const WaveParameters& params, const StabilityOptions& opts = {});

}  // namespace bch
