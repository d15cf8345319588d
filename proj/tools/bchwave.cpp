// bchwave: periodic traveling waves of the b-family, their stability
// classification, and direct simulation of perturbed waves.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "bch/error.hpp"
#include "commands.hpp"
#include "run_config.hpp"

namespace {

using bch::cli::RunConfig;

struct Flags {
  bch::WaveParameters params;
  bch::cli::Numerics numerics;
  std::string out, config, format, frame, perturbation;
  std::size_t jobs = 0;
  std::vector<double> a_range, E_range, c_range;
  bool E_fraction = false;
};

// Options registered on one subcommand, so flags can be applied after the
// config file only when the user actually passed them.
struct Registered {
  std::map<std::string, CLI::Option*> opt;
  bool given(const std::string& name) const {
    const auto it = opt.find(name);
    return it != opt.end() && it->second->count() > 0;
  }
};

void add_common(CLI::App* sub, Flags& f, Registered& r, bool evolve, bool sweep) {
  auto& o = r.opt;
  o["b"] = sub->add_option("--b", f.params.b, "Nonlinearity exponent b > 1");
  o["a"] = sub->add_option("--a", f.params.a, "Integration constant a");
  o["E"] = sub->add_option("--E", f.params.E, "Energy level E");
  o["c"] = sub->add_option("--c", f.params.c, "Wave speed c > 0");
  o["N"] = sub->add_option("--N", f.numerics.N, "Grid points per period (power of two >= 64)");
  o["modes"] = sub->add_option("--modes", f.numerics.modes, "Hill truncation M (0 selects N/4)");
  o["fd-step"] = sub->add_option("--fd-step", f.numerics.fd_step, "Relative FD step");
  o["min-margin"] = sub->add_option("--min-margin", f.numerics.min_margin,
                                    "Smallest admissible distance to the existence boundary");
  o["out"] = sub->add_option("--out", f.out, "Output directory (default: stdout)");
  o["format"] = sub->add_option("--format", f.format, "Output format")
                    ->check(CLI::IsMember({"csv", "json"}));
  o["config"] = sub->add_option("--config", f.config, "JSON run configuration")
                    ->check(CLI::ExistingFile);
  o["seed"] = sub->add_option("--seed", f.numerics.seed, "Random seed");
  o["proof-identities"] = sub->add_flag("--proof-identities", f.numerics.proof_identities,
                                        "Also evaluate the operator identities");
  o["trials"] = sub->add_option("--trials", f.numerics.coercivity_trials,
                                "Coercivity probe trials (0 skips the probe)");
  if (evolve) {
    o["dt-safety"] = sub->add_option("--dt-safety", f.numerics.dt_safety, "CFL safety factor");
    o["frame"] = sub->add_option("--frame", f.frame, "Reference frame")
                     ->check(CLI::IsMember({"traveling", "lab"}));
    o["eps"] = sub->add_option("--eps", f.numerics.eps, "H1 size of the initial perturbation");
    o["horizon-periods"] =
        sub->add_option("--horizon-periods", f.numerics.horizon_periods, "Run length in periods");
    o["samples-per-period"] = sub->add_option("--samples-per-period",
                                              f.numerics.samples_per_period, "Diagnostic samples");
    o["perturbation"] = sub->add_option("--perturbation", f.perturbation, "Perturbation family")
                            ->check(CLI::IsMember({"raw", "constrained"}));
  }
  if (sweep) {
    o["a-range"] = sub->add_option("--a-range", f.a_range, "min max count for a")->expected(3);
    o["E-range"] = sub->add_option("--E-range", f.E_range, "min max count for E")->expected(3);
    o["c-range"] = sub->add_option("--c-range", f.c_range, "min max count for c")->expected(3);
    o["E-fraction"] = sub->add_flag("--E-fraction", f.E_fraction,
                                    "Read E values as fractions of the admissible interval");
    o["jobs"] = sub->add_option("--jobs", f.jobs, "Worker threads (0: all cores)");
  }
}

bch::cli::Range to_range(const std::vector<double>& v) {
  if (v[2] < 1.0 || v[2] != static_cast<double>(static_cast<std::size_t>(v[2]))) {
    throw bch::Error(bch::ErrorKind::Domain, "range count must be a positive integer");
  }
  return {v[0], v[1], static_cast<std::size_t>(v[2])};
}

void apply_flags(RunConfig& cfg, const Flags& f, const Registered& r) {
  if (r.given("b")) cfg.params.b = f.params.b;
  if (r.given("a")) cfg.params.a = f.params.a;
  if (r.given("E")) cfg.params.E = f.params.E;
  if (r.given("c")) cfg.params.c = f.params.c;
  auto& n = cfg.numerics;
  const auto& fn = f.numerics;
  if (r.given("N")) n.N = fn.N;
  if (r.given("modes")) n.modes = fn.modes;
  if (r.given("fd-step")) n.fd_step = fn.fd_step;
  if (r.given("min-margin")) n.min_margin = fn.min_margin;
  if (r.given("seed")) n.seed = fn.seed;
  if (r.given("proof-identities")) n.proof_identities = fn.proof_identities;
  if (r.given("trials")) n.coercivity_trials = fn.coercivity_trials;
  if (r.given("dt-safety")) n.dt_safety = fn.dt_safety;
  if (r.given("eps")) n.eps = fn.eps;
  if (r.given("horizon-periods")) n.horizon_periods = fn.horizon_periods;
  if (r.given("samples-per-period")) n.samples_per_period = fn.samples_per_period;
  if (r.given("perturbation")) {
    n.perturbation = f.perturbation == "constrained" ? bch::PerturbationMode::Constrained
                                                     : bch::PerturbationMode::Raw;
  }
  if (r.given("frame")) cfg.frame = f.frame == "lab" ? bch::Frame::Lab : bch::Frame::Traveling;
  if (r.given("out")) cfg.out_dir = f.out;
  if (r.given("format")) {
    cfg.format = f.format == "csv" ? bch::cli::Format::Csv : bch::cli::Format::Json;
  }
  if (r.given("jobs")) cfg.jobs = f.jobs;

  if (cfg.command == "sweep") {
    // A single --a/--E/--c pins that axis unless a range is also given.
    if (r.given("a")) cfg.sweep.a = {f.params.a, f.params.a, 1};
    if (r.given("E")) cfg.sweep.E = {f.params.E, f.params.E, 1};
    if (r.given("c")) cfg.sweep.c = {f.params.c, f.params.c, 1};
    if (r.given("a-range")) cfg.sweep.a = to_range(f.a_range);
    if (r.given("E-range")) cfg.sweep.E = to_range(f.E_range);
    if (r.given("c-range")) cfg.sweep.c = to_range(f.c_range);
    if (r.given("E-fraction")) cfg.sweep.E_fraction = f.E_fraction;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic traveling waves of the b-family: profiles, stability, simulation"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    bool evolve;
    bool sweep;
  };
  const Sub subs[] = {
      {"profile", "Synthesize a wave profile and its residuals", false, false},
      {"classify", "Classify one wave by the stability criteria", false, false},
      {"spectrum", "Periodic spectrum of the linearized operator", false, false},
      {"evolve", "Evolve a perturbed wave and track the orbital distance", true, false},
      {"sweep", "Classify a grid of parameters", false, true},
  };

  Flags flags;
  std::map<std::string, Registered> registered;
  std::map<std::string, CLI::App*> apps;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, flags, registered[s.name], s.evolve, s.sweep);
    apps[s.name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bch::cli::kDomainRejection;
  }

  RunConfig cfg;
  for (const auto& [name, sub] : apps) {
    if (sub->parsed()) cfg.command = name;
  }
  const Registered& r = registered[cfg.command];
  try {
    if (r.given("config")) {
      const std::string chosen = cfg.command;
      bch::cli::load_config_file(cfg, flags.config);
      cfg.command = chosen;  // the subcommand on the command line wins
    }
    apply_flags(cfg, flags, r);
  } catch (const bch::Error& e) {
    std::cerr << "bchwave: " << e.what() << '\n';
    return bch::cli::kDomainRejection;
  }
  return bch::cli::run_command(cfg, std::cout, std::cerr);
}
