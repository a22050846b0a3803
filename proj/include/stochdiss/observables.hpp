#ifndef STOCHDISS_OBSERVABLES_HPP
#define STOCHDISS_OBSERVABLES_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "stochdiss/fields.hpp"
#include "stochdiss/morse.hpp"
#include "stochdiss/propagator.hpp"

namespace stochdiss {

/// sum_nu |<psi_nu|psi>|^2
double bound_population(const Wavefunction& psi, const BoundStateBasis& basis);

/// 1 - sum_nu |<psi_nu|psi>|^2. Amplitude removed by the absorber projects on
/// no bound state and therefore counts as dissociated. Unclamped.
double dissociation_probability(const Wavefunction& psi, const BoundStateBasis& basis);

/// Energy gained relative to e0: bound part sum E_nu |c_nu|^2, plus
/// <psi_c|H0|psi_c> of the on-grid continuum remainder; absorbed norm is
/// assigned the threshold energy 0.
double absorbed_energy(const Wavefunction& psi, const BoundStateBasis& basis, double e0);

struct DissociationRecord {
  std::size_t realization = 0;
  double probability = 0.0;  ///< clamped to [0, 1]
  std::uint64_t seed = 0;
};

struct EnsembleResult {
  std::vector<DissociationRecord> records;
  double mean = 0.0;
  double std_error = 0.0;  ///< sample standard deviation / sqrt(N)
  std::size_t n_realizations = 0;
};

/// Mean and standard error accumulated in record order.
EnsembleResult summarize(std::vector<DissociationRecord> records);

/// Everything needed to run one ensemble. The basis and context are shared
/// read-only; noise.seed is ignored and replaced per realization by
/// stream_seed(master_seed, cell, r).
struct EnsembleSetup {
  const BoundStateBasis* basis = nullptr;
  const StepContext* context = nullptr;
  PropagationConfig propagation;
  std::vector<LaserPulse> pulses;
  std::optional<NoiseSpec> noise;
  double noise_window = 0.0;  ///< noise acts for t < noise_window
  std::uint64_t master_seed = 0;
  std::uint64_t cell = 0;
};

/// True when the setup has no stochastic input, so every realization is the same.
bool is_deterministic(const EnsembleSetup& setup);

/// Final dissociation probability of realization r (clamped to [0, 1]).
/// Rethrows NumericalBlowupError annotated with the seed, cell and r.
DissociationRecord run_realization(const EnsembleSetup& setup, std::size_t r);

/// Propagates n_realizations independent realizations on up to `workers`
/// threads. Deterministic setups are propagated once and replicated.
EnsembleResult run_ensemble(const EnsembleSetup& setup, std::size_t n_realizations,
                            std::size_t workers = 1);

/// Floor applied to P_L + P_N before dividing.
inline constexpr double kEnhancementFloor = 1e-14;

struct Enhancement {
  double eta = 0.0;
  bool floored = false;  ///< P_L + P_N was below kEnhancementFloor
};

/// eta = (P_LN - (P_L + P_N)) / max(P_L + P_N, kEnhancementFloor)
Enhancement enhancement(double p_laser, double p_noise, double p_both);

struct EnhancementPoint {
  double sqrt_d = 0.0;
  double f0 = 0.0;
  double p_laser = 0.0;
  double p_noise = 0.0;
  double p_both = 0.0;
  double p_noise_err = 0.0;
  double p_both_err = 0.0;
  double eta = 0.0;
  bool floored = false;
};

}  // namespace stochdiss

#endif  // STOCHDISS_OBSERVABLES_HPP
