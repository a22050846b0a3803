#ifndef STOCHDISS_CONFIG_HPP
#define STOCHDISS_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stochdiss/fields.hpp"
#include "stochdiss/grid.hpp"
#include "stochdiss/morse.hpp"
#include "stochdiss/propagator.hpp"

namespace stochdiss {

inline constexpr const char* kVersionTag = "stochdiss 0.1.0";

enum class SweepKind { scurve, noise_sweep, landscape, frmg, filtered_compare };

std::string to_string(SweepKind kind);
SweepKind sweep_kind_from_string(const std::string& name);

struct MoleculeConfig {
  std::string preset = "hf";  ///< empty when the parameters are explicit
  MorseParams params = morse_preset("hf");

  bool operator==(const MoleculeConfig&) const = default;
};

struct GridConfig {
  double x_min = -2.0;
  double x_max = 38.0;
  std::size_t n_points = 1024;

  bool operator==(const GridConfig&) const = default;
};

/// Pump pulse; Tp = 2 pi cycles / omega.
struct PulseConfig {
  double amplitude = 0.04;
  double omega = 0.007;
  double phase = 0.0;
  double cycles = 15.0;

  double duration() const;
  LaserPulse pulse() const;
  bool operator==(const PulseConfig&) const = default;
};

/// Weak probe sharing the pump's duration and envelope.
struct ProbeConfig {
  double amplitude = 0.002;
  double phase = 0.0;

  bool operator==(const ProbeConfig&) const = default;
};

struct NoiseConfig {
  double sqrt_d = 0.02;
  NoiseShape shape = NoiseShape::white;
  double bandwidth = 1.0;
  std::vector<SpectralHole> holes;

  bool operator==(const NoiseConfig&) const = default;
};

/// Propagation settings; t_end is t_end_factor * Tp.
struct PropagationSettings {
  double dt = 0.1;
  double t_end_factor = 1.5;
  bool absorber = true;
  double absorber_start = 0.75;
  double absorber_power = 0.125;

  bool operator==(const PropagationSettings&) const = default;
};

struct SweepConfig {
  SweepKind kind = SweepKind::noise_sweep;
  std::vector<double> sqrt_d;
  std::vector<double> f0;
  std::vector<double> omega_p;

  bool operator==(const SweepConfig&) const = default;
};

struct RunConfig {
  MoleculeConfig molecule;
  GridConfig grid;
  PulseConfig pulse;
  ProbeConfig probe;
  NoiseConfig noise;
  PropagationSettings propagation;
  SweepConfig sweep;
  std::size_t realizations = 100;
  std::uint64_t master_seed = 20080101;
  std::string output_dir = "out";
  std::size_t workers = 0;  ///< 0 means default_worker_count()

  GridSpec grid_spec() const;
  PropagationConfig propagation_config() const;
  bool operator==(const RunConfig&) const = default;
};

/// Default sweep axes for each kind.
std::vector<double> default_sqrt_d_axis();
std::vector<double> default_f0_axis(SweepKind kind);
std::vector<double> default_omega_p_axis();

/// Default run settings with the default axes for `kind`.
RunConfig default_config(SweepKind kind = SweepKind::noise_sweep);

/// Throws ConfigError naming the offending field.
void validate(const RunConfig& cfg);

/// Parses a JSON document. Missing fields take their defaults; unknown
/// fields are rejected. Axes may be lists or {"from", "to", "count", "log"}.
/// The result is validated.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical JSON; parse_config(to_json_text(c)) == c.
std::string to_json_text(const RunConfig& cfg, int indent = 2);

/// Canonical JSON without the fields that cannot change results
/// (output directory, worker count), on one line.
std::string provenance_text(const RunConfig& cfg);

/// FNV-1a 64 of provenance_text, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace stochdiss

#endif  // STOCHDISS_CONFIG_HPP
