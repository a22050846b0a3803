#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "stochdiss/errors.hpp"
#include "stochdiss/morse.hpp"

using namespace stochdiss;

namespace {
const GridSpec& default_grid() {
  static const GridSpec g = make_grid(-2.0, 38.0, 1024);
  return g;
}
const BoundStateBasis& hf_basis() {
  static const BoundStateBasis b = solve_bound_states(morse_preset("hf"), default_grid());
  return b;
}
}  // namespace

TEST_CASE("HF derived constants") {
  const auto hf = morse_preset("hf");
  // Frozen from a direct evaluation of B = beta/sqrt(2 m De), omega_e = 2 B De.
  CHECK(hf.anharmonicity() == doctest::Approx(0.04190367780032769).epsilon(1e-12));
  CHECK(hf.omega_e() == doctest::Approx(0.018856655010147463).epsilon(1e-12));
  CHECK(hf.j() == doctest::Approx(23.36425374796529).epsilon(1e-12));
  CHECK(hf.bound_count() == 24);
  CHECK(hf.omega_e() == 2.0 * hf.anharmonicity() * hf.well_depth);
}

TEST_CASE("Morse potential values") {
  const auto hf = morse_preset("hf");
  CHECK(morse_potential(hf, 0.0) == -hf.well_depth);
  CHECK(std::abs(morse_potential(hf, 60.0)) < 1e-20);
  CHECK(morse_potential(hf, 1.0) == doctest::Approx(-0.11759694805340791).epsilon(1e-12));
}

TEST_CASE("analytic energies") {
  const auto hf = morse_preset("hf");
  CHECK(analytic_energy(hf, 0) == doctest::Approx(-0.21567044289441842).epsilon(1e-12));
  CHECK(analytic_energy(hf, 1) - analytic_energy(hf, 0) ==
        doctest::Approx(0.0180664918142103).epsilon(1e-10));
  CHECK(analytic_energy(hf, 1) - analytic_energy(hf, 0) ==
        doctest::Approx(hf.omega_e() * (1 - hf.anharmonicity())).epsilon(1e-12));
  CHECK_THROWS_AS(analytic_energy(hf, hf.bound_count()), std::out_of_range);
  CHECK_THROWS_AS(analytic_energy(hf, -1), std::out_of_range);
  for (const auto& name : morse_preset_names()) {
    const auto p = morse_preset(name);
    CHECK_THROWS_AS(analytic_energy(p, p.bound_count()), std::out_of_range);
    CHECK(analytic_energy(p, p.bound_count() - 1) < 0.0);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(MorseParams{1744.59, -0.225, 1.1741}), ConfigError);
  CHECK_THROWS_AS(validate(MorseParams{0.0, 0.225, 1.1741}), ConfigError);
  CHECK_THROWS_AS(validate(MorseParams{1.0, 0.1, 5.0}), ConfigError);  // B >= 2
  CHECK_THROWS_AS(morse_preset("nitrogen"), ConfigError);
  try {
    validate(MorseParams{1744.59, -0.225, 1.1741});
  } catch (const ConfigError& e) {
    CHECK(e.field() == "molecule.De");
  }
}

TEST_CASE("numerical bound states match the analytic spectrum") {
  const auto& basis = hf_basis();
  const auto hf = basis.params;
  REQUIRE(basis.size() == 24);
  for (int n = 0; n < 24; ++n) {
    const double tol = n <= 20 ? 1e-6 : 1e-4;
    CHECK(std::abs(basis.energies[n] - analytic_energy(hf, n)) < tol);
    CHECK(basis.energies[n] < 0.0);
    if (n > 0) CHECK(basis.energies[n] > basis.energies[n - 1]);
  }
  CHECK(basis.energies[0] == doctest::Approx(-0.21567).epsilon(1e-5));
}

TEST_CASE("bound states are orthonormal eigenvectors") {
  const auto& basis = hf_basis();
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = a; b < basis.size(); ++b) {
      const auto z = inner_product(basis.states[a], basis.states[b]);
      CHECK(std::abs(z - Complex(a == b ? 1.0 : 0.0)) < 1e-8);
    }
    // residual of H psi = E psi
    const auto h = apply_hamiltonian(basis.params, basis.states[a]);
    double resid = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i)
      resid = std::max(resid, std::abs(h[i] - basis.energies[a] * basis.states[a][i]));
    CHECK(resid < 1e-9);
  }
  CHECK(std::abs(inner_product(basis.states[5], basis.states[7])) < 1e-8);
}

TEST_CASE("ground state has no nodes and a single maximum") {
  const auto& psi = hf_basis().states[0];
  double peak = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) peak = std::max(peak, std::abs(psi[i]));
  int rises_after_fall = 0;
  bool falling = false;
  for (std::size_t i = 1; i < psi.size(); ++i) {
    const double prev = psi[i - 1].real(), cur = psi[i].real();
    if (std::abs(cur) < 1e-8 * peak) continue;
    CHECK(cur > 0.0);
    if (cur < prev) falling = true;
    if (falling && cur > prev + 1e-12 * peak) ++rises_after_fall;
  }
  CHECK(rises_after_fall == 0);
}

TEST_CASE("bound count equals the number of negative grid eigenvalues") {
  for (const auto& name : morse_preset_names()) {
    const auto p = morse_preset(name);
    const auto basis = solve_bound_states(p, make_grid(-2.0, 38.0, 512));
    CHECK(static_cast<int>(basis.size()) == p.bound_count());
  }
}

TEST_CASE("grid too small is reported") {
  const auto hf = morse_preset("hf");
  CHECK_THROWS_AS(solve_bound_states(hf, make_grid(-2.0, 6.0, 256)), GridTooSmallError);
}
