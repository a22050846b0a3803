#ifndef STOCHDISS_EXPERIMENTS_HPP
#define STOCHDISS_EXPERIMENTS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stochdiss/config.hpp"
#include "stochdiss/observables.hpp"
#include "stochdiss/table.hpp"

namespace stochdiss {

/// Everything derived once from a RunConfig and shared read-only by all cells.
struct Model {
  RunConfig config;
  GridSpec grid;
  BoundStateBasis basis;
  PropagationConfig propagation;
  StepContext context;
  LaserPulse pump;
};

/// Solves the bound states and precomputes the step factors.
Model prepare_model(const RunConfig& config);

/// One line of the run log.
struct CellLog {
  std::string key;
  double mean = 0.0;
  double std_error = 0.0;
  double seconds = 0.0;
  bool cached = false;
};

struct SweepHooks {
  std::size_t workers = 1;
  CellCache* cache = nullptr;                   ///< optional resume store
  std::function<void(const CellLog&)> on_cell;  ///< called from the calling thread
};

/// Seed-stream cell of a noise amplitude. Derived from the value rather than
/// its axis position, so the same sqrt(D) draws the same realizations in every
/// sweep, and the noise-only and laser-plus-noise ensembles share them.
std::uint64_t noise_cell(double sqrt_d);

struct ScurvePoint {
  double f0 = 0.0;
  double p_laser = 0.0;
};

/// Laser-only dissociation per F0 (noise ignored).
std::vector<ScurvePoint> run_scurve(const Model& model, std::span<const double> f0_values,
                                    const SweepHooks& hooks = {});

/// P_L, P_N, P_LN and eta per sqrt(D) at the pump amplitude of the model,
/// using the model's noise shape and holes.
std::vector<EnhancementPoint> run_noise_sweep(const Model& model, std::span<const double> sqrt_d_values,
                                              const SweepHooks& hooks = {});

struct Landscape {
  std::vector<double> sqrt_d;
  std::vector<double> f0;
  std::vector<EnhancementPoint> points;  ///< row-major, index i * f0.size() + j
  std::size_t peak = 0;                  ///< index of the largest eta

  const EnhancementPoint& at(std::size_t i, std::size_t j) const { return points[i * f0.size() + j]; }
};

Landscape run_landscape(const Model& model, std::span<const double> sqrt_d_values,
                        std::span<const double> f0_values, const SweepHooks& hooks = {});

/// Net absorbed energy against probe frequency with the pump on (gain) and
/// off (bare). pump_only is the pump-alone absorbed energy.
struct GainProfile {
  std::vector<double> omega_p;
  std::vector<double> gain;
  std::vector<double> bare;
  double probe_amplitude = 0.0;
  double pump_only = 0.0;
  LaserPulse pump;
};

GainProfile run_frmg(const Model& model, std::span<const double> omega_p_values,
                     const SweepHooks& hooks = {});

/// Probe pulse at frequency omega_p with the model's probe settings.
LaserPulse probe_pulse(const Model& model, double omega_p);

struct FilteredComparison {
  std::vector<EnhancementPoint> broadband;
  std::vector<EnhancementPoint> perforated;
  std::vector<SpectralHole> holes;
};

/// Band-limited noise without holes against the model's perforated noise.
FilteredComparison run_filtered_compare(const Model& model, std::span<const double> sqrt_d_values,
                                        const SweepHooks& hooks = {});

/// Output tables.
Table scurve_table(const RunConfig& cfg, std::span<const ScurvePoint> points);
Table enhancement_table(const RunConfig& cfg, const std::string& name,
                        std::span<const EnhancementPoint> points);
Table landscape_table(const RunConfig& cfg, const Landscape& landscape);
Table gain_table(const RunConfig& cfg, const GainProfile& profile);
Table filtered_table(const RunConfig& cfg, const FilteredComparison& cmp);
Table eigen_table(const BoundStateBasis& basis);

/// Index of the largest eta; floored points are skipped unless every point
/// is floored.
std::size_t peak_index(std::span<const EnhancementPoint> points);

}  // namespace stochdiss

#endif  // STOCHDISS_EXPERIMENTS_HPP
