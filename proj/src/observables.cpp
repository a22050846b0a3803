#include "stochdiss/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stochdiss/errors.hpp"
#include "stochdiss/parallel.hpp"
#include "stochdiss/rng.hpp"

namespace stochdiss {

double bound_population(const Wavefunction& psi, const BoundStateBasis& basis) {
  double total = 0.0;
  for (const auto& state : basis.states) total += std::norm(inner_product(state, psi));
  return total;
}

double dissociation_probability(const Wavefunction& psi, const BoundStateBasis& basis) {
  return 1.0 - bound_population(psi, basis);
}

double absorbed_energy(const Wavefunction& psi, const BoundStateBasis& basis, double e0) {
  Wavefunction continuum = psi;
  double bound_energy = 0.0;
  for (std::size_t nu = 0; nu < basis.size(); ++nu) {
    const auto& state = basis.states[nu];
    const Complex c = inner_product(state, psi);
    bound_energy += basis.energies[nu] * std::norm(c);
    for (std::size_t i = 0; i < continuum.size(); ++i) continuum[i] -= c * state[i];
  }
  const auto h_c = apply_hamiltonian(basis.params, continuum);
  const double continuum_energy = inner_product(continuum, h_c).real();
  return bound_energy + continuum_energy - e0;
}

EnsembleResult summarize(std::vector<DissociationRecord> records) {
  EnsembleResult out;
  out.n_realizations = records.size();
  if (!records.empty()) {
    double sum = 0.0;
    for (const auto& r : records) sum += r.probability;
    const auto n = static_cast<double>(records.size());
    out.mean = sum / n;
    if (records.size() > 1) {
      double ss = 0.0;
      for (const auto& r : records) ss += (r.probability - out.mean) * (r.probability - out.mean);
      out.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
  }
  out.records = std::move(records);
  return out;
}

bool is_deterministic(const EnsembleSetup& setup) {
  return !setup.noise.has_value() || setup.noise->intensity == 0.0 || setup.noise_window <= 0.0;
}

DissociationRecord run_realization(const EnsembleSetup& setup, std::size_t r) {
  if (setup.basis == nullptr || setup.context == nullptr)
    throw std::invalid_argument("ensemble: basis and step context are required");
  const auto& basis = *setup.basis;
  const auto& ctx = *setup.context;
  const bool stochastic = !is_deterministic(setup);
  const std::uint64_t seed = stochastic ? stream_seed(setup.master_seed, setup.cell, r) : 0;

  std::optional<NoiseRealization> noise;
  Drive drive{setup.pulses, nullptr, 0.0};
  if (stochastic) {
    NoiseSpec spec = *setup.noise;
    spec.seed = seed;
    noise = sample_noise(spec, steps_before(setup.noise_window, setup.propagation.dt),
                         setup.propagation.dt);
    drive.noise = &*noise;
    drive.noise_window = setup.noise_window;
  }
  try {
    const auto result = propagate_realization(basis.states.front(), drive, ctx, setup.propagation);
    const double p = dissociation_probability(result.final_state, basis);
    return {r, std::clamp(p, 0.0, 1.0), seed};
  } catch (const NumericalBlowupError& e) {
    throw NumericalBlowupError(std::string(e.what()) + " (seed " + std::to_string(seed) + ", cell " +
                                   std::to_string(setup.cell) + ", realization " +
                                   std::to_string(r) + ")",
                               seed, static_cast<std::int64_t>(setup.cell),
                               static_cast<std::int64_t>(r));
  }
}

EnsembleResult run_ensemble(const EnsembleSetup& setup, std::size_t n_realizations,
                            std::size_t workers) {
  if (n_realizations == 0) throw std::invalid_argument("ensemble: need at least one realization");
  std::vector<DissociationRecord> records(n_realizations);
  if (is_deterministic(setup)) {
    const auto first = run_realization(setup, 0);
    for (std::size_t r = 0; r < n_realizations; ++r) records[r] = {r, first.probability, 0};
  } else {
    parallel_for(n_realizations, workers,
                 [&](std::size_t r) { records[r] = run_realization(setup, r); });
  }
  return summarize(std::move(records));
}

Enhancement enhancement(double p_laser, double p_noise, double p_both) {
  const double p0 = p_laser + p_noise;
  const bool floored = p0 < kEnhancementFloor;
  return {(p_both - p0) / std::max(p0, kEnhancementFloor), floored};
}

}  // namespace stochdiss
