#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "bch/evolution.hpp"
#include "bch/potential.hpp"
#include "bch/report.hpp"

namespace bch::cli {

struct Range {
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 1;

  [[nodiscard]] double at(std::size_t i) const {
    if (count <= 1) return min;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
};

struct SweepGrid {
  Range a{0.1, 0.1, 1};
  Range E{0.09, 0.09, 1};
  Range c{1.0, 1.0, 1};
  /// Read E values as fractions s of the admissible interval,
  /// E = V(phi2) + s (V(phi1) - V(phi2)).
  bool E_fraction = false;
};

struct Numerics {
  std::size_t N = 512;
  std::size_t modes = 0;  ///< 0 selects N/4
  double dt_safety = 0.5;
  double fd_step = 1e-5;
  double min_margin = 1e-9;
  double eps = 1e-3;
  double horizon_periods = 50.0;
  std::size_t samples_per_period = 8;
  PerturbationMode perturbation = PerturbationMode::Raw;
  std::uint64_t seed = 2024;
  bool proof_identities = false;
  std::size_t coercivity_trials = 0;
};

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;
  WaveParameters params{};
  SweepGrid sweep{};
  Numerics numerics{};
  Frame frame = Frame::Traveling;
  std::string out_dir;  ///< empty: write to stdout
  Format format = Format::Json;
  std::size_t jobs = 0;  ///< 0: hardware concurrency
};

/// Fills cfg from a JSON document; keys that are absent keep their value.
/// Throws Error(Domain) on malformed input.
void apply_json(RunConfig& cfg, const json& doc);
void load_config_file(RunConfig& cfg, const std::string& path);

/// Throws Error(Domain) if any tolerance or size is out of range.
void validate(const RunConfig& cfg);

json config_echo(const RunConfig& cfg);

std::string_view to_string(Format f) noexcept;
std::string_view to_string(Frame f) noexcept;
std::string_view to_string(PerturbationMode m) noexcept;

}  // namespace bch::cli
