#include "stochdiss/morse.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "stochdiss/errors.hpp"
#include "stochdiss/spectral.hpp"

namespace stochdiss {

double MorseParams::anharmonicity() const { return beta / std::sqrt(2.0 * mass * well_depth); }
double MorseParams::omega_e() const { return 2.0 * anharmonicity() * well_depth; }
double MorseParams::j() const { return 1.0 / anharmonicity() - 0.5; }
int MorseParams::bound_count() const { return static_cast<int>(std::floor(j())) + 1; }

void validate(const MorseParams& params) {
  if (!(params.mass > 0.0)) throw ConfigError("molecule.mass", "must be positive");
  if (!(params.well_depth > 0.0)) throw ConfigError("molecule.De", "must be positive");
  if (!(params.beta > 0.0)) throw ConfigError("molecule.beta", "must be positive");
  const double b = params.anharmonicity();
  if (!(b > 0.0 && b < 2.0))
    throw ConfigError("molecule", "anharmonicity B must lie in (0, 2) for a bound level");
}

namespace {
// Literature Morse constants, converted to atomic units.
const std::map<std::string, MorseParams>& presets() {
  static const std::map<std::string, MorseParams> table{
      {"hf", {1744.59, 0.225, 1.1741}},
      {"hcl", {1785.9, 0.16971, 0.98905}},
      {"h2", {918.58, 0.17436, 1.02799}},
  };
  return table;
}
}  // namespace

MorseParams morse_preset(const std::string& name) {
  const auto& table = presets();
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("molecule.preset", "unknown molecule '" + name + "'");
  return it->second;
}

std::vector<std::string> morse_preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : presets()) names.push_back(name);
  return names;
}

double morse_potential(const MorseParams& params, double x) {
  const double e = 1.0 - std::exp(-params.beta * x);
  return -params.well_depth + params.well_depth * e * e;
}

double analytic_energy(const MorseParams& params, int n) {
  if (n < 0 || n >= params.bound_count())
    throw std::out_of_range("analytic_energy: level " + std::to_string(n) +
                            " is outside the bound spectrum");
  const double b = params.anharmonicity();
  const double v = n + 0.5;
  return params.omega_e() * v * (1.0 - b * v / 2.0) - params.well_depth;
}

std::vector<double> sample_potential(const MorseParams& params, const GridSpec& grid) {
  std::vector<double> v(grid.n_points);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = morse_potential(params, grid.x(i));
  return v;
}

Wavefunction apply_hamiltonian(const MorseParams& params, const Wavefunction& psi) {
  const auto& grid = psi.grid();
  auto phi = to_momentum(psi);
  for (std::size_t k = 0; k < phi.amplitudes.size(); ++k) {
    const double p = grid.p(k);
    phi.amplitudes[k] *= p * p / (2.0 * params.mass);
  }
  auto out = to_position(phi);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] += morse_potential(params, grid.x(i)) * psi[i];
  return out;
}

namespace {

// Solves (T - shift) x = rhs in place for a symmetric tridiagonal T using
// Gaussian elimination with partial pivoting. Near-zero pivots are replaced by
// a tiny value, which is exactly what inverse iteration wants.
void tridiagonal_solve(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, double shift,
                       Eigen::VectorXd& x) {
  const Eigen::Index n = diag.size();
  // Rows after elimination: u0 (diagonal), u1, u2 (two superdiagonals).
  Eigen::VectorXd u0(n), u1 = Eigen::VectorXd::Zero(n), u2 = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd lower(n);
  std::vector<bool> swapped(static_cast<std::size_t>(n), false);
  const double tiny = std::numeric_limits<double>::epsilon() *
                      std::max(diag.cwiseAbs().maxCoeff(), sub.cwiseAbs().maxCoeff());

  // Working copies of the current and next row.
  double a = diag(0) - shift;
  double b = n > 1 ? sub(0) : 0.0;
  double c = 0.0;
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    const double l = sub(i);
    const double d_next = diag(i + 1) - shift;
    const double e_next = i + 1 < n - 1 ? sub(i + 1) : 0.0;
    if (std::abs(a) >= std::abs(l)) {
      if (a == 0.0) a = tiny;
      const double m = l / a;
      lower(i) = m;
      u0(i) = a;
      u1(i) = b;
      u2(i) = c;
      a = d_next - m * b;
      b = e_next - m * c;
      c = 0.0;
    } else {
      // swap rows i and i+1
      swapped[static_cast<std::size_t>(i)] = true;
      const double m = a / l;
      lower(i) = m;
      u0(i) = l;
      u1(i) = d_next;
      u2(i) = e_next;
      const double na = b - m * d_next;
      const double nb = c - m * e_next;
      a = na;
      b = nb;
      c = 0.0;
    }
  }
  if (a == 0.0) a = tiny;
  u0(n - 1) = a;

  // forward substitution with the recorded swaps
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    if (swapped[static_cast<std::size_t>(i)]) std::swap(x(i), x(i + 1));
    x(i + 1) -= lower(i) * x(i);
  }
  // back substitution
  x(n - 1) /= u0(n - 1);
  if (n > 1) x(n - 2) = (x(n - 2) - u1(n - 2) * x(n - 1)) / u0(n - 2);
  for (Eigen::Index i = n - 3; i >= 0; --i)
    x(i) = (x(i) - u1(i) * x(i + 1) - u2(i) * x(i + 2)) / u0(i);
}

}  // namespace

void grid_eigenstates(const GridSpec& grid, double mass, std::span<const double> potential,
                      double ceiling, std::vector<double>& energies,
                      std::vector<Wavefunction>& states) {
  const auto n = static_cast<Eigen::Index>(grid.n_points);
  if (potential.size() != grid.n_points)
    throw std::invalid_argument("grid_eigenstates: potential length does not match grid");

  // Fourier-grid kinetic matrix: T_ij = (1/N) sum_k p_k^2/2m cos(p_k (x_i - x_j)).
  // It is the same spectral operator the propagator exponentiates.
  std::vector<double> kinetic_row(grid.n_points);
  for (std::size_t d = 0; d < grid.n_points; ++d) {
    double s = 0.0;
    for (std::size_t k = 0; k < grid.n_points; ++k) {
      const double p = grid.p(k);
      s += p * p / (2.0 * mass) * std::cos(p * static_cast<double>(d) * grid.dx());
    }
    kinetic_row[d] = s / static_cast<double>(grid.n_points);
  }
  Eigen::MatrixXd h(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      h(i, j) = kinetic_row[static_cast<std::size_t>(std::abs(i - j))] +
                (i == j ? potential[static_cast<std::size_t>(i)] : 0.0);

  Eigen::Tridiagonalization<Eigen::MatrixXd> tri(h);
  const Eigen::VectorXd diag = tri.diagonal();
  const Eigen::VectorXd sub = tri.subDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& evals = solver.eigenvalues();

  std::vector<double> kept;
  for (Eigen::Index k = 0; k < n && evals(k) < ceiling; ++k) kept.push_back(evals(k));
  const auto m = static_cast<Eigen::Index>(kept.size());

  // Inverse iteration on the tridiagonal form, then back-transform.
  Eigen::MatrixXd y(n, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) += 0.01 * std::sin(0.37 * static_cast<double>(i));
    for (int it = 0; it < 3; ++it) {
      tridiagonal_solve(diag, sub, kept[static_cast<std::size_t>(c)], v);
      v.normalize();
    }
    y.col(c) = v;
  }
  Eigen::MatrixXd vecs = tri.matrixQ() * y;

  // Re-orthonormalise (modified Gram-Schmidt, two passes).
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index c = 0; c < m; ++c) {
      for (Eigen::Index prev = 0; prev < c; ++prev)
        vecs.col(c) -= vecs.col(prev).dot(vecs.col(c)) * vecs.col(prev);
      vecs.col(c).normalize();
    }
  }

  energies.assign(kept.begin(), kept.end());
  states.clear();
  const double scale = 1.0 / std::sqrt(grid.dx());
  for (Eigen::Index c = 0; c < m; ++c) {
    // Sign convention: the outermost significant lobe is positive, so the
    // ground state is positive everywhere.
    const double peak = vecs.col(c).cwiseAbs().maxCoeff();
    double sign = 1.0;
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      if (std::abs(vecs(i, c)) > 1e-3 * peak) {
        sign = vecs(i, c) > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    ComplexVector amps(grid.n_points);
    for (Eigen::Index i = 0; i < n; ++i)
      amps[static_cast<std::size_t>(i)] = sign * scale * vecs(i, c);
    states.emplace_back(grid, std::move(amps));
  }
}

BoundStateBasis solve_bound_states(const MorseParams& params, const GridSpec& grid) {
  validate(params);
  const double asymptote = morse_potential(params, grid.x_max);
  if (std::abs(asymptote) > 1e-8)
    throw GridTooSmallError("solve_bound_states: potential at x_max is " +
                            std::to_string(asymptote) + " hartree, not yet at threshold");

  BoundStateBasis basis{params, grid, {}, {}};
  const auto potential = sample_potential(params, grid);
  grid_eigenstates(grid, params.mass, potential, 0.0, basis.energies, basis.states);
  const auto expected = static_cast<std::size_t>(params.bound_count());
  if (basis.energies.size() < expected)
    throw GridTooSmallError("solve_bound_states: found " + std::to_string(basis.energies.size()) +
                            " bound levels, expected " + std::to_string(expected));
  return basis;
}

}  // namespace stochdiss
