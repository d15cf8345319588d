#pragma once

// JSON and CSV serialization of every report type. CSV floats are written
// with 17 significant digits so files round-trip and diff exactly.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "bch/evolution.hpp"
#include "bch/invariants.hpp"
#include "bch/potential.hpp"
#include "bch/profile.hpp"
#include "bch/spectral.hpp"
#include "bch/stability.hpp"

namespace bch {

using json = nlohmann::ordered_json;

std::string format_double(double v);

void to_json(json& j, const WaveParameters& p);
void to_json(json& j, const PotentialScan& s);
void to_json(json& j, const ProfileResiduals& r);
void to_json(json& j, const ConservedQuantities& q);
void to_json(json& j, const Multipliers& m);
void to_json(json& j, const JacobianReport& r);
void to_json(json& j, const AppendixReport& r);
void to_json(json& j, const SpectralReport& r);
void to_json(json& j, const ProofIdentities& r);
void to_json(json& j, const CoercivityResult& r);
void to_json(json& j, const StabilityBundle& b);
/// Summary only; the time series go to CSV.
void to_json(json& j, const RunDiagnostics& d);

/// A "# T=... N=..." line, then columns x, phi, dphi, d2phi, mu, dmu, d2mu; one row
/// per grid point.
void write_profile_csv(std::ostream& os, const WaveProfile& profile);
void write_eigenvalues_csv(std::ostream& os, const SpectralReport& r);
/// Columns t, E_drift, F1_drift, F2_drift, rho.
void write_diagnostics_csv(std::ostream& os, const RunDiagnostics& d);

}  // namespace bch
