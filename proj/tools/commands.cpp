#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "bch/error.hpp"
#include "bch/kernels.hpp"
#include "bch/stability.hpp"

namespace bch::cli {

namespace fs = std::filesystem;

namespace {

StabilityOptions stability_options(const RunConfig& cfg) {
  StabilityOptions o;
  o.N = cfg.numerics.N;
  o.spectrum.modes = cfg.numerics.modes;
  o.fd.rel_step = cfg.numerics.fd_step;
  o.fd.min_margin = cfg.numerics.min_margin;
  o.proof_identities = cfg.numerics.proof_identities;
  o.coercivity_trials = cfg.numerics.coercivity_trials;
  o.seed = cfg.numerics.seed;
  return o;
}

void require_admissible(const WaveParameters& p) {
  const ExistenceResult ex = existence_check(p);
  if (!ex.admissible) throw Error(ErrorKind::NotInExistenceSet, ex.reason);
}

// Writes to <out_dir>/<name>, or to the stream when no directory was given.
template <class Writer>
void emit(const RunConfig& cfg, const std::string& name, std::ostream& out, Writer&& write) {
  if (cfg.out_dir.empty()) {
    write(out);
    return;
  }
  fs::create_directories(cfg.out_dir);
  const fs::path path = fs::path(cfg.out_dir) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  write(f);
}

json envelope(const RunConfig& cfg) {
  json j;
  j["config"] = config_echo(cfg);
  j["kernels"] = std::string(kernels::to_string(kernels::active().isa));
  return j;
}

constexpr std::ptrdiff_t kSweepColumns = 18;

std::string csv_field(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int cmd_profile(const RunConfig& cfg, std::ostream& out) {
  require_admissible(cfg.params);
  const WaveProfile prof = synthesize_profile(cfg.params, cfg.numerics.N);
  json j = envelope(cfg);
  j["T"] = prof.T;
  j["N"] = prof.N;
  j["phi_min"] = prof.phi_min;
  j["phi_max"] = prof.phi_max;
  j["residuals"] = profile_residuals(prof);
  j["conserved"] = conserved_quantities(prof);
  const Multipliers w = multipliers(cfg.params);
  j["multipliers"] = w;
  j["euler_lagrange_residual"] = euler_lagrange_residual(prof, w);

  if (!cfg.out_dir.empty()) {
    emit(cfg, "profile.csv", out, [&](std::ostream& os) { write_profile_csv(os, prof); });
    emit(cfg, "profile.json", out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    out << j.dump(2) << '\n';
  } else if (cfg.format == Format::Csv) {
    write_profile_csv(out, prof);
  } else {
    out << j.dump(2) << '\n';
  }
  return kSuccess;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const StabilityBundle b = classify_stability(cfg.params, stability_options(cfg));
  json j = envelope(cfg);
  j["report"] = b;
  if (cfg.format == Format::Csv) {
    emit(cfg, "classify.csv", out, [&](std::ostream& os) {
      os << sweep_header() << '\n' << sweep_row(0, cfg.params, cfg) << '\n';
    });
  } else {
    emit(cfg, "classify.json", out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  }
  if (!cfg.out_dir.empty()) out << "classification: " << to_string(b.classification) << '\n';
  return kSuccess;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  require_admissible(cfg.params);
  const WaveProfile prof = synthesize_profile(cfg.params, cfg.numerics.N);
  const Multipliers w = multipliers(cfg.params);
  const OperatorCoefficients op = assemble_operator(prof, w);
  SpectrumOptions so;
  so.modes = cfg.numerics.modes;
  const SpectralReport rep = periodic_spectrum(op, prof, so);
  json j = envelope(cfg);
  j["spectrum"] = rep;
  j["operator"] = json{{"p_min", op.p_min},
                       {"self_adjoint_gap", op.self_adjoint_gap},
                       {"printed_q_over_p_prime", op.printed_q_ratio}};
  if (!cfg.out_dir.empty()) {
    emit(cfg, "eigenvalues.csv", out, [&](std::ostream& os) { write_eigenvalues_csv(os, rep); });
    emit(cfg, "spectrum.json", out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    out << j.dump(2) << '\n';
  } else if (cfg.format == Format::Csv) {
    write_eigenvalues_csv(out, rep);
  } else {
    out << j.dump(2) << '\n';
  }
  return kSuccess;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_admissible(cfg.params);
  const WaveProfile prof = synthesize_profile(cfg.params, cfg.numerics.N);
  ExperimentConfig ec;
  ec.perturbation.eps = cfg.numerics.eps;
  ec.perturbation.mode = cfg.numerics.perturbation;
  ec.perturbation.seed = cfg.numerics.seed;
  ec.horizon_periods = cfg.numerics.horizon_periods;
  ec.dt_safety = cfg.numerics.dt_safety;
  ec.frame = cfg.frame;
  ec.samples_per_period = cfg.numerics.samples_per_period;
  const RunDiagnostics d = run_experiment(prof, ec);
  json j = envelope(cfg);
  j["T"] = prof.T;
  j["diagnostics"] = d;
  if (!cfg.out_dir.empty()) {
    emit(cfg, "diagnostics.csv", out, [&](std::ostream& os) { write_diagnostics_csv(os, d); });
    emit(cfg, "evolve.json", out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    out << j.dump(2) << '\n';
  } else if (cfg.format == Format::Csv) {
    write_diagnostics_csv(out, d);
  } else {
    out << j.dump(2) << '\n';
  }
  if (d.aborted) {
    err << "bchwave: run stopped early: " << d.abort_message << '\n';
    return kNumericalFailure;
  }
  return kSuccess;
}

std::string sweep_header() {
  return "index,b,a,E,c,T,F1,F2,omega1,omega2,J_T_omega1,J_T_F1,J3,theta,n_neg,n_zero,"
         "classification,reason";
}

std::string sweep_row(std::size_t index, const WaveParameters& p, const RunConfig& cfg) {
  std::ostringstream os;
  os << index << ',' << format_double(p.b) << ',' << format_double(p.a) << ','
     << format_double(p.E) << ',' << format_double(p.c) << ',';
  auto skipped = [&](std::string_view label, const std::string& reason) {
    os << ",,,,,,,,,,," << label << ',' << csv_field(reason);
    return os.str();
  };

  // Gate: closed-boundary points and points with too little room for the
  // finite-difference stencil are MarginTooSmall; the rest of the outside is
  // NotInExistenceSet.
  const ExistenceResult ex = existence_check(p);
  if (!ex.admissible) {
    if (ex.scan) {
      const PotentialScan& s = *ex.scan;
      if (p.E == s.V_phi1 || p.E == s.V_phi2) {
        return skipped("OutOfScope", "MarginTooSmall: E on the boundary of the existence set");
      }
    } else if (p.b > 1.0 && p.c > 0.0 && (p.a == 0.0 || p.a == a_max(p.b, p.c))) {
      return skipped("OutOfScope", "MarginTooSmall: a on the boundary of the existence set");
    }
    return skipped("OutOfScope", "NotInExistenceSet: " + ex.reason);
  }
  try {
    const StabilityBundle b = classify_stability(p, stability_options(cfg));
    const JacobianReport& J = b.jacobians;
    os << format_double(J.invariants.T) << ',' << format_double(J.invariants.F1) << ','
       << format_double(J.invariants.F2) << ',' << format_double(J.invariants.omega1) << ','
       << format_double(J.invariants.omega2) << ',' << format_double(J.J_T_omega1) << ','
       << format_double(J.J_T_F1) << ',' << format_double(J.J3) << ',' << format_double(J.theta)
       << ',' << b.spectrum.n_neg << ',' << b.spectrum.n_zero << ','
       << to_string(b.classification) << ',';
    return os.str();
  } catch (const Error& e) {
    const std::string_view label = is_domain_rejection(e.kind()) ? "OutOfScope" : "Indeterminate";
    return skipped(label, e.what());
  }
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SweepGrid& g = cfg.sweep;
  const std::size_t na = g.a.count, nE = g.E.count, nc = g.c.count;
  const std::size_t total = na * nE * nc;

  std::vector<WaveParameters> points(total);
  for (std::size_t ia = 0; ia < na; ++ia) {
    for (std::size_t iE = 0; iE < nE; ++iE) {
      for (std::size_t ic = 0; ic < nc; ++ic) {
        WaveParameters p{cfg.params.b, g.a.at(ia), g.E.at(iE), g.c.at(ic)};
        if (g.E_fraction) {
          const ExistenceResult ex = existence_check({p.b, p.a, 0.0, p.c});
          if (ex.scan) {
            const double s = p.E;
            p.E = ex.scan->V_phi2 + s * (ex.scan->V_phi1 - ex.scan->V_phi2);
            if (s == 0.0) p.E = ex.scan->V_phi2;
            if (s == 1.0) p.E = ex.scan->V_phi1;
          }
        }
        points[(ia * nE + iE) * nc + ic] = p;
      }
    }
  }

  fs::create_directories(cfg.out_dir);
  const fs::path manifest_path = fs::path(cfg.out_dir) / "sweep.manifest";
  const std::string signature = "# " + config_echo(cfg).dump();

  std::map<std::size_t, std::string> rows;
  if (fs::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    std::string line;
    std::getline(in, line);
    if (line != signature) {
      throw Error(ErrorKind::Domain, "manifest " + manifest_path.string() +
                                         " was written for a different configuration; remove it "
                                         "or choose another --out");
    }
    while (std::getline(in, line)) {
      // A row cut short by an interruption is recomputed.
      if (std::count(line.begin(), line.end(), ',') != kSweepColumns - 1) continue;
      const auto comma = line.find(',');
      const std::size_t idx = std::stoul(line.substr(0, comma));
      if (idx < total) rows[idx] = line;
    }
  }

  std::ofstream manifest(manifest_path, std::ios::app | std::ios::binary);
  if (!manifest) throw std::runtime_error("cannot write " + manifest_path.string());
  if (rows.empty() && fs::file_size(manifest_path) == 0) manifest << signature << '\n' << std::flush;

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < total; ++i)
    if (!rows.count(i)) todo.push_back(i);

  std::mutex writer;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= todo.size()) return;
      const std::size_t idx = todo[k];
      std::string row = sweep_row(idx, points[idx], cfg);
      std::lock_guard lock(writer);
      manifest << row << '\n' << std::flush;
      rows[idx] = std::move(row);
    }
  };
  std::size_t jobs = cfg.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.jobs;
  jobs = std::min(jobs, std::max<std::size_t>(todo.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
  }

  const fs::path csv_path = fs::path(cfg.out_dir) / "sweep.csv";
  {
    std::ofstream csv(csv_path, std::ios::binary);
    csv << sweep_header() << '\n';
    for (const auto& [idx, row] : rows) csv << row << '\n';
  }

  std::map<std::string, std::size_t> tally;
  for (const auto& [idx, row] : rows) {
    const auto last = row.rfind(',');
    const auto prev = row.rfind(',', last - 1);
    ++tally[row.substr(prev + 1, last - prev - 1)];
  }
  json j = envelope(cfg);
  j["points"] = total;
  j["resumed"] = total - todo.size();
  j["csv"] = csv_path.string();
  j["classifications"] = tally;
  out << j.dump(2) << '\n';
  (void)err;
  return kSuccess;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    if (cfg.command == "profile") return cmd_profile(cfg, out);
    if (cfg.command == "classify") return cmd_classify(cfg, out);
    if (cfg.command == "spectrum") return cmd_spectrum(cfg, out);
    if (cfg.command == "evolve") return cmd_evolve(cfg, out, err);
    if (cfg.command == "sweep") return cmd_sweep(cfg, out, err);
    err << "bchwave: unknown command '" << cfg.command << "'\n";
    return kDomainRejection;
  } catch (const Error& e) {
    err << "bchwave: " << e.what() << '\n';
    if (is_domain_rejection(e.kind())) return kDomainRejection;
    if (is_numerical_failure(e.kind())) return kNumericalFailure;
    return kInternal;
  } catch (const std::exception& e) {
    err << "bchwave: internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace bch::cli
