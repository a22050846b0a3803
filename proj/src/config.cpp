#include "stochdiss/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "stochdiss/errors.hpp"

namespace stochdiss {

using nlohmann::json;

namespace {

const char* shape_name(NoiseShape s) { return s == NoiseShape::white ? "white" : "band_limited"; }

std::vector<double> linspace(double from, double to, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = count == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

std::vector<double> logspace(double from, double to, std::size_t count) {
  auto out = linspace(std::log(from), std::log(to), count);
  for (auto& v : out) v = std::exp(v);
  if (count > 1) {
    out.front() = from;
    out.back() = to;
  }
  return out;
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!ok.count(key)) throw ConfigError(where.empty() ? key : where + "." + key, "unknown field");
  }
}

template <typename T>
void read(const json& j, const char* key, const std::string& where, T& out) {
  if (!j.contains(key)) return;
  const std::string field = where.empty() ? std::string(key) : where + "." + key;
  try {
    if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
      if (!j.at(key).is_number_unsigned()) throw ConfigError(field, "expected a non-negative integer");
    } else if constexpr (std::is_same_v<T, double>) {
      if (!j.at(key).is_number()) throw ConfigError(field, "expected a number");
    }
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(field, "wrong type");
  }
}

std::vector<double> read_axis(const json& j, const std::string& field) {
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& v : j) {
      if (!v.is_number()) throw ConfigError(field, "axis values must be numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  check_keys(j, field, {"from", "to", "count", "log"});
  double from = 0.0, to = 0.0;
  std::size_t count = 0;
  bool log = false;
  read(j, "from", field, from);
  read(j, "to", field, to);
  read(j, "count", field, count);
  read(j, "log", field, log);
  if (count == 0) throw ConfigError(field + ".count", "must be positive");
  if (log && !(from > 0.0 && to > 0.0)) throw ConfigError(field, "log axis needs positive bounds");
  return log ? logspace(from, to, count) : linspace(from, to, count);
}

void check_axis(const std::vector<double>& axis, const std::string& field) {
  if (axis.empty()) throw ConfigError(field, "axis must not be empty");
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (!std::isfinite(axis[i])) throw ConfigError(field, "axis values must be finite");
    if (i > 0 && !(axis[i] > axis[i - 1])) throw ConfigError(field, "axis must be strictly increasing");
  }
}

json to_json(const RunConfig& c, bool with_output) {
  json j;
  json mol;
  if (!c.molecule.preset.empty()) mol["preset"] = c.molecule.preset;
  mol["mass"] = c.molecule.params.mass;
  mol["De"] = c.molecule.params.well_depth;
  mol["beta"] = c.molecule.params.beta;
  j["molecule"] = mol;
  j["grid"] = {{"x_min", c.grid.x_min}, {"x_max", c.grid.x_max}, {"n_points", c.grid.n_points}};
  j["pulse"] = {{"F0", c.pulse.amplitude},
                {"omega", c.pulse.omega},
                {"phase", c.pulse.phase},
                {"cycles", c.pulse.cycles}};
  j["probe"] = {{"F0", c.probe.amplitude}, {"phase", c.probe.phase}};
  json holes = json::array();
  for (const auto& h : c.noise.holes) holes.push_back({{"center", h.center}, {"width", h.width}});
  j["noise"] = {{"sqrt_D", c.noise.sqrt_d},
                {"shape", shape_name(c.noise.shape)},
                {"bandwidth", c.noise.bandwidth},
                {"holes", holes}};
  j["propagation"] = {{"dt", c.propagation.dt},
                      {"t_end_factor", c.propagation.t_end_factor},
                      {"absorber", c.propagation.absorber},
                      {"absorber_start", c.propagation.absorber_start},
                      {"absorber_power", c.propagation.absorber_power}};
  j["sweep"] = {{"kind", to_string(c.sweep.kind)},
                {"sqrt_D", c.sweep.sqrt_d},
                {"F0", c.sweep.f0},
                {"omega_p", c.sweep.omega_p}};
  j["ensemble"] = {{"realizations", c.realizations}, {"master_seed", c.master_seed}};
  if (with_output) {
    j["output"] = {{"directory", c.output_dir}};
    j["workers"] = c.workers;
  }
  return j;
}

}  // namespace

std::string to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::scurve: return "scurve";
    case SweepKind::noise_sweep: return "noise_sweep";
    case SweepKind::landscape: return "landscape";
    case SweepKind::frmg: return "frmg";
    case SweepKind::filtered_compare: return "filtered_compare";
  }
  return "?";
}

SweepKind sweep_kind_from_string(const std::string& name) {
  for (auto k : {SweepKind::scurve, SweepKind::noise_sweep, SweepKind::landscape, SweepKind::frmg,
                 SweepKind::filtered_compare})
    if (to_string(k) == name) return k;
  throw ConfigError("sweep.kind", "unknown sweep kind '" + name + "'");
}

double PulseConfig::duration() const { return 2.0 * std::numbers::pi * cycles / omega; }

LaserPulse PulseConfig::pulse() const { return {amplitude, omega, phase, duration()}; }

GridSpec RunConfig::grid_spec() const { return make_grid(grid.x_min, grid.x_max, grid.n_points); }

PropagationConfig RunConfig::propagation_config() const {
  PropagationConfig p;
  p.dt = propagation.dt;
  p.t_end = propagation.t_end_factor * pulse.duration();
  p.absorber = propagation.absorber;
  p.absorber_start = propagation.absorber_start;
  p.absorber_power = propagation.absorber_power;
  return p;
}

std::vector<double> default_sqrt_d_axis() { return logspace(0.002, 0.06, 20); }

std::vector<double> default_f0_axis(SweepKind kind) {
  if (kind == SweepKind::scurve)
    return {0.02, 0.04, 0.06, 0.07, 0.08, 0.09, 0.10, 0.11, 0.12, 0.15, 0.20, 0.30};
  return linspace(0.01, 0.12, 12);
}

std::vector<double> default_omega_p_axis() { return linspace(0.002, 0.030, 280); }

RunConfig default_config(SweepKind kind) {
  RunConfig c;
  c.sweep.kind = kind;
  c.sweep.sqrt_d = default_sqrt_d_axis();
  c.sweep.f0 = default_f0_axis(kind);
  c.sweep.omega_p = default_omega_p_axis();
  if (kind == SweepKind::filtered_compare) {
    c.noise.shape = NoiseShape::band_limited;
    c.noise.holes = resonance_holes(c.molecule.params, 4, 0.008);
  }
  return c;
}

void validate(const RunConfig& c) {
  if (!c.molecule.preset.empty()) {
    const auto preset = morse_preset(c.molecule.preset);  // throws on unknown names
    (void)preset;
  }
  validate(c.molecule.params);
  if (!(c.grid.x_max > c.grid.x_min)) throw ConfigError("grid.x_max", "must exceed grid.x_min");
  if (c.grid.n_points < 8 || !is_power_of_two(c.grid.n_points))
    throw ConfigError("grid.n_points", "must be a power of two >= 8");
  if (!(c.pulse.amplitude >= 0.0)) throw ConfigError("pulse.F0", "must be >= 0");
  if (!(c.pulse.omega > 0.0)) throw ConfigError("pulse.omega", "must be positive");
  if (!(c.pulse.cycles > 0.0)) throw ConfigError("pulse.cycles", "must be positive");
  if (!std::isfinite(c.pulse.phase)) throw ConfigError("pulse.phase", "must be finite");
  if (!(c.probe.amplitude >= 0.0)) throw ConfigError("probe.F0", "must be >= 0");
  if (!std::isfinite(c.probe.phase)) throw ConfigError("probe.phase", "must be finite");
  if (!(c.noise.sqrt_d >= 0.0)) throw ConfigError("noise.sqrt_D", "must be >= 0");
  validate(NoiseSpec{c.noise.sqrt_d * c.noise.sqrt_d, 0, c.noise.shape, c.noise.bandwidth, c.noise.holes});
  if (c.noise.shape == NoiseShape::white && !c.noise.holes.empty())
    throw ConfigError("noise.holes", "holes need shape band_limited");
  if (!(c.propagation.t_end_factor >= 1.0))
    throw ConfigError("propagation.t_end_factor", "must be >= 1 so the run outlasts the pulse");
  validate(c.propagation_config());
  if (c.realizations == 0) throw ConfigError("ensemble.realizations", "must be positive");

  switch (c.sweep.kind) {
    case SweepKind::scurve: check_axis(c.sweep.f0, "sweep.F0"); break;
    case SweepKind::noise_sweep:
    case SweepKind::filtered_compare: check_axis(c.sweep.sqrt_d, "sweep.sqrt_D"); break;
    case SweepKind::landscape:
      check_axis(c.sweep.sqrt_d, "sweep.sqrt_D");
      check_axis(c.sweep.f0, "sweep.F0");
      break;
    case SweepKind::frmg: check_axis(c.sweep.omega_p, "sweep.omega_p"); break;
  }
  for (double v : c.sweep.sqrt_d)
    if (!(v >= 0.0)) throw ConfigError("sweep.sqrt_D", "values must be >= 0");
  for (double v : c.sweep.f0)
    if (!(v >= 0.0)) throw ConfigError("sweep.F0", "values must be >= 0");
  for (double v : c.sweep.omega_p)
    if (!(v > 0.0)) throw ConfigError("sweep.omega_p", "values must be positive");
  if (c.sweep.kind == SweepKind::filtered_compare && c.noise.shape != NoiseShape::band_limited)
    throw ConfigError("noise.shape", "filtered_compare needs band_limited noise");
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed config: ") + e.what());
  }
  check_keys(j, "", {"molecule", "grid", "pulse", "probe", "noise", "propagation", "sweep", "ensemble",
                     "output", "workers"});

  SweepKind kind = SweepKind::noise_sweep;
  if (j.contains("sweep") && j["sweep"].is_object() && j["sweep"].contains("kind")) {
    if (!j["sweep"]["kind"].is_string()) throw ConfigError("sweep.kind", "expected a string");
    kind = sweep_kind_from_string(j["sweep"]["kind"].get<std::string>());
  }
  RunConfig c = default_config(kind);

  if (j.contains("molecule")) {
    const auto& m = j["molecule"];
    if (m.is_string()) {
      c.molecule.preset = m.get<std::string>();
      c.molecule.params = morse_preset(c.molecule.preset);
    } else {
      check_keys(m, "molecule", {"preset", "mass", "De", "beta"});
      if (m.contains("preset")) {
        read(m, "preset", "molecule", c.molecule.preset);
        c.molecule.params = morse_preset(c.molecule.preset);
      } else if (m.contains("mass") || m.contains("De") || m.contains("beta")) {
        if (!(m.contains("mass") && m.contains("De") && m.contains("beta")))
          throw ConfigError("molecule", "explicit parameters need mass, De and beta");
        c.molecule.preset.clear();
      }
      read(m, "mass", "molecule", c.molecule.params.mass);
      read(m, "De", "molecule", c.molecule.params.well_depth);
      read(m, "beta", "molecule", c.molecule.params.beta);
      if (!c.molecule.preset.empty() && !(c.molecule.params == morse_preset(c.molecule.preset)))
        c.molecule.preset.clear();
    }
    if (kind == SweepKind::filtered_compare)
      c.noise.holes = resonance_holes(c.molecule.params, 4, 0.008);
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    check_keys(g, "grid", {"x_min", "x_max", "n_points"});
    read(g, "x_min", "grid", c.grid.x_min);
    read(g, "x_max", "grid", c.grid.x_max);
    read(g, "n_points", "grid", c.grid.n_points);
  }
  if (j.contains("pulse")) {
    const auto& p = j["pulse"];
    check_keys(p, "pulse", {"F0", "omega", "phase", "cycles"});
    read(p, "F0", "pulse", c.pulse.amplitude);
    read(p, "omega", "pulse", c.pulse.omega);
    read(p, "phase", "pulse", c.pulse.phase);
    read(p, "cycles", "pulse", c.pulse.cycles);
  }
  if (j.contains("probe")) {
    const auto& p = j["probe"];
    check_keys(p, "probe", {"F0", "phase"});
    read(p, "F0", "probe", c.probe.amplitude);
    read(p, "phase", "probe", c.probe.phase);
  }
  if (j.contains("noise")) {
    const auto& n = j["noise"];
    check_keys(n, "noise", {"sqrt_D", "shape", "bandwidth", "holes"});
    read(n, "sqrt_D", "noise", c.noise.sqrt_d);
    if (n.contains("shape")) {
      const auto s = n["shape"].is_string() ? n["shape"].get<std::string>() : std::string();
      if (s == "white")
        c.noise.shape = NoiseShape::white;
      else if (s == "band_limited")
        c.noise.shape = NoiseShape::band_limited;
      else
        throw ConfigError("noise.shape", "expected 'white' or 'band_limited'");
    }
    read(n, "bandwidth", "noise", c.noise.bandwidth);
    if (n.contains("holes")) {
      const auto& h = n["holes"];
      c.noise.holes.clear();
      if (h.is_object()) {
        // {"resonances": count, "width": w} expands to holes on the first level gaps
        check_keys(h, "noise.holes", {"resonances", "width"});
        std::size_t count = 4;
        double width = 0.008;
        read(h, "resonances", "noise.holes", count);
        read(h, "width", "noise.holes", width);
        c.noise.holes = resonance_holes(c.molecule.params, static_cast<int>(count), width);
      } else if (h.is_array()) {
        for (std::size_t i = 0; i < h.size(); ++i) {
          const std::string where = "noise.holes[" + std::to_string(i) + "]";
          check_keys(h[i], where, {"center", "width"});
          SpectralHole hole;
          read(h[i], "center", where, hole.center);
          read(h[i], "width", where, hole.width);
          c.noise.holes.push_back(hole);
        }
      } else {
        throw ConfigError("noise.holes", "expected a list or {resonances, width}");
      }
    }
  }
  if (j.contains("propagation")) {
    const auto& p = j["propagation"];
    check_keys(p, "propagation", {"dt", "t_end_factor", "absorber", "absorber_start", "absorber_power"});
    read(p, "dt", "propagation", c.propagation.dt);
    read(p, "t_end_factor", "propagation", c.propagation.t_end_factor);
    read(p, "absorber", "propagation", c.propagation.absorber);
    read(p, "absorber_start", "propagation", c.propagation.absorber_start);
    read(p, "absorber_power", "propagation", c.propagation.absorber_power);
  }
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    check_keys(s, "sweep", {"kind", "sqrt_D", "F0", "omega_p"});
    if (s.contains("sqrt_D")) c.sweep.sqrt_d = read_axis(s["sqrt_D"], "sweep.sqrt_D");
    if (s.contains("F0")) c.sweep.f0 = read_axis(s["F0"], "sweep.F0");
    if (s.contains("omega_p")) c.sweep.omega_p = read_axis(s["omega_p"], "sweep.omega_p");
  }
  if (j.contains("ensemble")) {
    const auto& e = j["ensemble"];
    check_keys(e, "ensemble", {"realizations", "master_seed"});
    read(e, "realizations", "ensemble", c.realizations);
    read(e, "master_seed", "ensemble", c.master_seed);
  }
  if (j.contains("output")) {
    check_keys(j["output"], "output", {"directory"});
    read(j["output"], "directory", "output", c.output_dir);
  }
  if (j.contains("workers")) read(j, "workers", "", c.workers);

  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_json_text(const RunConfig& cfg, int indent) { return to_json(cfg, true).dump(indent); }

std::string provenance_text(const RunConfig& cfg) { return to_json(cfg, false).dump(); }

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : provenance_text(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace stochdiss
