#ifndef STOCHDISS_PROPAGATOR_HPP
#define STOCHDISS_PROPAGATOR_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "stochdiss/fields.hpp"
#include "stochdiss/grid.hpp"
#include "stochdiss/morse.hpp"

namespace stochdiss {

struct PropagationConfig {
  double dt = 0.1;               ///< time step, a.u.
  double t_end = 0.0;            ///< total propagation time, a.u.
  bool absorber = true;
  double absorber_start = 0.75;  ///< fraction of the grid where the mask begins
  double absorber_power = 0.125; ///< mask = cos(pi s / 2)^power on the outer zone

  bool operator==(const PropagationConfig&) const = default;
};

/// Throws ConfigError on dt <= 0, t_end < 0 or absorber_start outside (0.5, 1).
void validate(const PropagationConfig& cfg);

/// Precomputed, immutable operator factors for one (grid, potential, dt).
/// Shared read-only by every realization.
struct StepContext {
  GridSpec grid;
  double dt = 0.0;
  double mass = 0.0;
  std::vector<double> positions;
  std::vector<double> potential;
  ComplexVector kinetic;          ///< exp(-i p^2/2m dt) / N, FFT order
  ComplexVector half_potential;   ///< exp(-i V dt/2)
  ComplexVector full_potential;   ///< mask * exp(-i V dt)
  std::vector<double> mask;       ///< 1 outside the absorbing zone, in (0, 1] inside
};

/// Cosine-power absorber mask on the large-x edge of the grid.
std::vector<double> absorber_mask(const GridSpec& grid, const PropagationConfig& cfg);

/// Throws ConfigError if dt (max|V| + p_max^2/2m) >= pi.
StepContext make_step_context(const MorseParams& params, const GridSpec& grid,
                              const PropagationConfig& cfg);
StepContext make_step_context(const GridSpec& grid, double mass, std::vector<double> potential,
                              const PropagationConfig& cfg);

/// One short-time step: the noise kick exp(i x kick), a Strang step of
/// exp(-i (H0 - x F) dt), then the absorber mask. Throws
/// NumericalBlowupError if the result is not finite.
Wavefunction step(const Wavefunction& psi, const StepContext& ctx, double field, double kick);

/// Fields acting on one realization. Noise kicks apply to steps starting
/// before noise_window.
struct Drive {
  std::span<const LaserPulse> pulses;
  const NoiseRealization* noise = nullptr;
  double noise_window = 0.0;
};

/// Number of steps of length dt that start before `window`.
std::size_t steps_before(double window, double dt);

struct TraceRecord {
  double t = 0.0;
  double norm = 0.0;
  double bound_population = 0.0;
  double mean_x = 0.0;
};

struct PropagationOptions {
  /// Record a TraceRecord every this many steps (0 disables tracing).
  std::size_t trace_every = 0;
  /// Needed for bound_population in trace records.
  const BoundStateBasis* basis = nullptr;
};

struct PropagationResult {
  Wavefunction final_state;
  std::vector<TraceRecord> trace;
};

/// Iterates `step` from t = 0 to cfg.t_end with the laser evaluated at each
/// step midpoint. Adjacent position-diagonal factors are merged between
/// kinetic steps, which is exactly the same operator product.
PropagationResult propagate_realization(const Wavefunction& psi0, const Drive& drive,
                                        const StepContext& ctx, const PropagationConfig& cfg,
                                        const PropagationOptions& options = {});

void write_trace(std::ostream& out, std::span<const TraceRecord> trace);

}  // namespace stochdiss

#endif  // STOCHDISS_PROPAGATOR_HPP
