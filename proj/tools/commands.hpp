#pragma once

#include <iosfwd>
#include <string>

#include "run_config.hpp"

namespace bch::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInternal = 1,
  kDomainRejection = 2,
  kNumericalFailure = 3,
};

/// Dispatches cfg.command. Library errors become exit codes with a one-line
/// diagnostic on err; nothing escapes.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int cmd_profile(const RunConfig& cfg, std::ostream& out);
int cmd_classify(const RunConfig& cfg, std::ostream& out);
int cmd_spectrum(const RunConfig& cfg, std::ostream& out);
int cmd_evolve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// One sweep row (without the trailing newline) for the point with the given
/// grid index.
std::string sweep_row(std::size_t index, const WaveParameters& params, const RunConfig& cfg);
std::string sweep_header();

}  // namespace bch::cli
