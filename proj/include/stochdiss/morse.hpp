#ifndef STOCHDISS_MORSE_HPP
#define STOCHDISS_MORSE_HPP

#include <span>
#include <string>
#include <vector>

#include "stochdiss/grid.hpp"

namespace stochdiss {

/// Morse oscillator V(x) = -De + De (1 - exp(-beta x))^2 with x = R - R0.
/// Atomic units throughout (hbar = 1).
struct MorseParams {
  double mass = 0.0;        ///< reduced mass
  double well_depth = 0.0;  ///< De, hartree
  double beta = 0.0;        ///< inverse range, 1/bohr

  /// B = beta / sqrt(2 m De)
  double anharmonicity() const;
  /// omega_e = 2 B De
  double omega_e() const;
  /// j = 1/B - 1/2
  double j() const;
  /// floor(j) + 1
  int bound_count() const;

  bool operator==(const MorseParams&) const = default;
};

/// Throws ConfigError unless m, De, beta > 0 and 0 < B < 2.
void validate(const MorseParams& params);

/// Built-in molecules: "hf", "hcl", "h2". Throws ConfigError for unknown names.
MorseParams morse_preset(const std::string& name);
std::vector<std::string> morse_preset_names();

double morse_potential(const MorseParams& params, double x);

/// Level energy on the potential's own scale (well bottom -De, threshold 0):
/// omega_e (n+1/2) [1 - B (n+1/2)/2] - De. Throws std::out_of_range for
/// n outside [0, floor(j)].
double analytic_energy(const MorseParams& params, int n);

std::vector<double> sample_potential(const MorseParams& params, const GridSpec& grid);

/// H0 psi with the kinetic term applied spectrally on the periodic grid.
Wavefunction apply_hamiltonian(const MorseParams& params, const Wavefunction& psi);

/// Numerical bound states of the grid Hamiltonian, sorted by energy.
/// Immutable once built; share it read-only across workers.
struct BoundStateBasis {
  MorseParams params;
  GridSpec grid;
  std::vector<Wavefunction> states;
  std::vector<double> energies;

  std::size_t size() const { return states.size(); }
};

/// Diagonalises the Fourier-grid Hamiltonian and keeps every eigenpair with
/// negative energy. Throws GridTooSmallError if the potential has not reached
/// its asymptote at x_max or fewer than bound_count() levels are bound.
BoundStateBasis solve_bound_states(const MorseParams& params, const GridSpec& grid);

/// Lowest eigenpairs (up to max_states, energies below `ceiling`) of
/// p^2/2m + V on the grid, for arbitrary sampled potentials.
void grid_eigenstates(const GridSpec& grid, double mass, std::span<const double> potential,
                      double ceiling, std::vector<double>& energies,
                      std::vector<Wavefunction>& states);

}  // namespace stochdiss

#endif  // STOCHDISS_MORSE_HPP
