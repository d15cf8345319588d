#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bch/error.hpp"
#include "bch/fourier.hpp"

namespace bch::cli {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Domain, what); }

template <class T>
void read(const json& obj, const char* key, T& dst) {
  if (!obj.contains(key)) return;
  try {
    dst = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    bad(std::string("config key '") + key + "': " + e.what());
  }
}

void read_range(const json& obj, const char* key, Range& r) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (v.is_number()) {
    r.min = r.max = v.get<double>();
    r.count = 1;
    return;
  }
  if (!v.is_object()) bad(std::string("sweep range '") + key + "' must be a number or an object");
  read(v, "min", r.min);
  read(v, "max", r.max);
  read(v, "count", r.count);
}

}  // namespace

std::string_view to_string(Format f) noexcept { return f == Format::Csv ? "csv" : "json"; }
std::string_view to_string(Frame f) noexcept { return f == Frame::Lab ? "lab" : "traveling"; }
std::string_view to_string(PerturbationMode m) noexcept {
  return m == PerturbationMode::Constrained ? "constrained" : "raw";
}

void apply_json(RunConfig& cfg, const json& doc) {
  if (!doc.is_object()) bad("config document must be a JSON object");
  read(doc, "command", cfg.command);
  if (doc.contains("params")) {
    const json& p = doc.at("params");
    read(p, "b", cfg.params.b);
    read(p, "a", cfg.params.a);
    read(p, "E", cfg.params.E);
    read(p, "c", cfg.params.c);
  }
  if (doc.contains("numerics")) {
    const json& n = doc.at("numerics");
    Numerics& u = cfg.numerics;
    read(n, "N", u.N);
    read(n, "modes", u.modes);
    read(n, "dt_safety", u.dt_safety);
    read(n, "fd_step", u.fd_step);
    read(n, "min_margin", u.min_margin);
    read(n, "eps", u.eps);
    read(n, "horizon_periods", u.horizon_periods);
    read(n, "samples_per_period", u.samples_per_period);
    read(n, "seed", u.seed);
    read(n, "proof_identities", u.proof_identities);
    read(n, "coercivity_trials", u.coercivity_trials);
    if (n.contains("perturbation")) {
      std::string m;
      read(n, "perturbation", m);
      if (m == "raw") u.perturbation = PerturbationMode::Raw;
      else if (m == "constrained") u.perturbation = PerturbationMode::Constrained;
      else bad("perturbation must be 'raw' or 'constrained'");
    }
  }
  if (doc.contains("frame")) {
    std::string f;
    read(doc, "frame", f);
    if (f == "traveling") cfg.frame = Frame::Traveling;
    else if (f == "lab") cfg.frame = Frame::Lab;
    else bad("frame must be 'traveling' or 'lab'");
  }
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    read(o, "dir", cfg.out_dir);
    if (o.contains("format")) {
      std::string f;
      read(o, "format", f);
      if (f == "csv") cfg.format = Format::Csv;
      else if (f == "json") cfg.format = Format::Json;
      else bad("format must be 'csv' or 'json'");
    }
  }
  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    if (s.contains("b")) read(s, "b", cfg.params.b);
    read_range(s, "a", cfg.sweep.a);
    read_range(s, "E", cfg.sweep.E);
    read_range(s, "c", cfg.sweep.c);
    read(s, "E_fraction", cfg.sweep.E_fraction);
  }
  read(doc, "jobs", cfg.jobs);
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    bad("config file '" + path + "' is not valid JSON: " + e.what());
  }
  apply_json(cfg, doc);
}

void validate(const RunConfig& cfg) {
  const Numerics& n = cfg.numerics;
  std::ostringstream os;
  if (!is_power_of_two(n.N, 64)) os << "N = " << n.N << " must be a power of two >= 64; ";
  if (n.modes != 0 && 4 * n.modes > n.N) os << "modes must not exceed N/4; ";
  if (!(n.dt_safety > 0.0 && n.dt_safety <= 1.0)) os << "dt-safety must lie in (0, 1]; ";
  if (!(n.fd_step > 0.0 && n.fd_step < 1e-1)) os << "fd-step must lie in (0, 0.1); ";
  if (!(n.min_margin > 0.0)) os << "min_margin must be positive; ";
  if (!(n.eps >= 0.0) || !std::isfinite(n.eps)) os << "eps must be finite and non-negative; ";
  if (!(n.horizon_periods > 0.0) || !std::isfinite(n.horizon_periods))
    os << "horizon-periods must be positive; ";
  if (n.samples_per_period == 0) os << "samples_per_period must be positive; ";
  if (cfg.command == "sweep") {
    for (const Range* r : {&cfg.sweep.a, &cfg.sweep.E, &cfg.sweep.c}) {
      if (r->count == 0) os << "sweep ranges need count >= 1; ";
      if (!std::isfinite(r->min) || !std::isfinite(r->max)) os << "sweep bounds must be finite; ";
    }
    if (cfg.out_dir.empty()) os << "sweep requires --out (results and manifest live there); ";
  }
  const std::string msg = os.str();
  if (!msg.empty()) bad(msg.substr(0, msg.size() - 2));
}

json config_echo(const RunConfig& cfg) {
  const Numerics& n = cfg.numerics;
  json j;
  j["command"] = cfg.command;
  j["params"] = cfg.params;
  j["numerics"] = json{{"N", n.N},
                       {"modes", n.modes == 0 ? n.N / 4 : n.modes},
                       {"dt_safety", n.dt_safety},
                       {"fd_step", n.fd_step},
                       {"min_margin", n.min_margin},
                       {"eps", n.eps},
                       {"horizon_periods", n.horizon_periods},
                       {"samples_per_period", n.samples_per_period},
                       {"perturbation", std::string(to_string(n.perturbation))},
                       {"seed", n.seed},
                       {"proof_identities", n.proof_identities},
                       {"coercivity_trials", n.coercivity_trials}};
  j["frame"] = std::string(to_string(cfg.frame));
  if (cfg.command == "sweep") {
    auto range = [](const Range& r) { return json{{"min", r.min}, {"max", r.max}, {"count", r.count}}; };
    j["sweep"] = json{{"b", cfg.params.b},
                      {"a", range(cfg.sweep.a)},
                      {"E", range(cfg.sweep.E)},
                      {"c", range(cfg.sweep.c)},
                      {"E_fraction", cfg.sweep.E_fraction}};
  }
  return j;
}

}  // namespace bch::cli
