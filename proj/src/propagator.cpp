#include "stochdiss/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>

#include "stochdiss/errors.hpp"
#include "stochdiss/spectral.hpp"

namespace stochdiss {

void validate(const PropagationConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt))
    throw ConfigError("propagation.dt", "time step must be positive");
  if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end))
    throw ConfigError("propagation.t_end", "must be finite and >= 0");
  if (!(cfg.absorber_start > 0.5 && cfg.absorber_start < 1.0))
    throw ConfigError("propagation.absorber_start", "must lie in (0.5, 1)");
  if (!(cfg.absorber_power > 0.0))
    throw ConfigError("propagation.absorber_power", "must be positive");
}

namespace {

inline Complex cmul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

// exp(i theta) with components nudged by at most one ulp so |z|^2 is as close
// to 1 as double allows. The same factors are applied ~1e5 times per run, so
// an unbiased modulus keeps the norm from drifting.
Complex unit_phase(double theta) {
  const double c0 = std::cos(theta);
  const double s0 = std::sin(theta);
  Complex best{c0, s0};
  long double best_err = -1.0L;
  for (int dc = -1; dc <= 1; ++dc) {
    double c = c0;
    if (dc < 0) c = std::nextafter(c0, -2.0);
    if (dc > 0) c = std::nextafter(c0, 2.0);
    for (int ds = -1; ds <= 1; ++ds) {
      double s = s0;
      if (ds < 0) s = std::nextafter(s0, -2.0);
      if (ds > 0) s = std::nextafter(s0, 2.0);
      const long double lc = c, ls = s;
      const long double err = std::abs(lc * lc + ls * ls - 1.0L);
      if (best_err < 0.0L || err < best_err) {
        best_err = err;
        best = {c, s};
      }
    }
  }
  return best;
}

constexpr std::size_t kPhaseBlock = 32;

// psi_i *= diag_i * exp(i a x_i) with x_i = x0 + i dx. The linear phase is
// advanced by recurrence and re-seeded exactly every kPhaseBlock points.
void multiply_diagonal(std::span<Complex> psi, std::span<const Complex> diag, double x0, double dx,
                       double a) {
  const std::size_t n = psi.size();
  if (a == 0.0) {
    for (std::size_t i = 0; i < n; ++i) psi[i] = cmul(psi[i], diag[i]);
    return;
  }
  const Complex w = std::polar(1.0, a * dx);
  for (std::size_t b = 0; b < n; b += kPhaseBlock) {
    Complex c = std::polar(1.0, a * (x0 + static_cast<double>(b) * dx));
    const std::size_t end = std::min(n, b + kPhaseBlock);
    for (std::size_t i = b; i < end; ++i) {
      psi[i] = cmul(psi[i], cmul(diag[i], c));
      c = cmul(c, w);
    }
  }
}

void multiply_linear_phase(std::span<Complex> psi, double x0, double dx, double a) {
  if (a == 0.0) return;
  const Complex w = std::polar(1.0, a * dx);
  for (std::size_t b = 0; b < psi.size(); b += kPhaseBlock) {
    Complex c = std::polar(1.0, a * (x0 + static_cast<double>(b) * dx));
    const std::size_t end = std::min(psi.size(), b + kPhaseBlock);
    for (std::size_t i = b; i < end; ++i) {
      psi[i] = cmul(psi[i], c);
      c = cmul(c, w);
    }
  }
}

void kinetic_step(std::span<Complex> psi, const StepContext& ctx) {
  const auto& fft = FftPlan::for_size(psi.size());
  fft.forward(psi);
  for (std::size_t k = 0; k < psi.size(); ++k) psi[k] = cmul(psi[k], ctx.kinetic[k]);
  fft.backward(psi);
}

bool all_finite(std::span<const Complex> psi) {
  double s = 0.0;
  for (const auto& z : psi) s += z.real() * z.real() + z.imag() * z.imag();
  return std::isfinite(s);
}

}  // namespace

std::vector<double> absorber_mask(const GridSpec& grid, const PropagationConfig& cfg) {
  std::vector<double> mask(grid.n_points, 1.0);
  if (!cfg.absorber) return mask;
  const double start = grid.x_min + cfg.absorber_start * grid.length();
  const double span = grid.x_max - start;
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double x = grid.x(i);
    if (x <= start) continue;
    const double s = (x - start) / span;
    mask[i] = std::pow(std::cos(std::numbers::pi * s / 2.0), cfg.absorber_power);
  }
  return mask;
}

StepContext make_step_context(const MorseParams& params, const GridSpec& grid,
                              const PropagationConfig& cfg) {
  validate(params);
  return make_step_context(grid, params.mass, sample_potential(params, grid), cfg);
}

StepContext make_step_context(const GridSpec& grid, double mass, std::vector<double> potential,
                              const PropagationConfig& cfg) {
  validate(cfg);
  if (potential.size() != grid.n_points)
    throw std::invalid_argument("step context: potential length does not match grid");
  const double v_max = std::ranges::max(potential, {}, [](double v) { return std::abs(v); });
  const double phase_per_step =
      cfg.dt * (std::abs(v_max) + grid.p_max() * grid.p_max() / (2.0 * mass));
  if (!(phase_per_step < std::numbers::pi))
    throw ConfigError("propagation.dt", "phase advance per step " + std::to_string(phase_per_step) +
                                            " rad exceeds pi on this grid");

  StepContext ctx;
  ctx.grid = grid;
  ctx.dt = cfg.dt;
  ctx.mass = mass;
  ctx.positions = grid.positions();
  ctx.potential = std::move(potential);
  ctx.mask = absorber_mask(grid, cfg);
  const auto n = grid.n_points;
  ctx.kinetic.resize(n);
  ctx.half_potential.resize(n);
  ctx.full_potential.resize(n);
  // 1/N is a power of two, so folding it into the kinetic factor is exact.
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double p = grid.p(k);
    ctx.kinetic[k] = unit_phase(-p * p / (2.0 * mass) * cfg.dt) * inv_n;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double v = ctx.potential[i];
    ctx.half_potential[i] = unit_phase(-v * cfg.dt / 2.0);
    ctx.full_potential[i] = ctx.mask[i] * unit_phase(-v * cfg.dt);
  }
  return ctx;
}

Wavefunction step(const Wavefunction& psi, const StepContext& ctx, double field, double kick) {
  if (!(psi.grid() == ctx.grid))
    throw std::invalid_argument("step: wavefunction and context use different grids");
  Wavefunction out = psi;
  auto amps = out.amplitudes();
  const double x0 = ctx.grid.x_min;
  const double dx = ctx.grid.dx();
  // noise kick
  multiply_linear_phase(amps, x0, dx, kick);
  // Strang step of exp(-i (H0 - x F) dt)
  multiply_diagonal(amps, ctx.half_potential, x0, dx, field * ctx.dt / 2.0);
  kinetic_step(amps, ctx);
  multiply_diagonal(amps, ctx.half_potential, x0, dx, field * ctx.dt / 2.0);
  // absorber
  for (std::size_t i = 0; i < amps.size(); ++i) amps[i] *= ctx.mask[i];
  if (!all_finite(amps)) throw NumericalBlowupError("step: non-finite amplitudes");
  return out;
}

std::size_t steps_before(double window, double dt) {
  if (!(window > 0.0)) return 0;
  auto n = static_cast<std::size_t>(std::ceil(window / dt));
  while (n > 0 && static_cast<double>(n - 1) * dt >= window) --n;
  while (static_cast<double>(n) * dt < window) ++n;
  return n;
}

void write_trace(std::ostream& out, std::span<const TraceRecord> trace) {
  out << "# t[a.u.]\tnorm\tbound_population\tmean_x[bohr]\n" << std::setprecision(12);
  for (const auto& r : trace)
    out << r.t << '\t' << r.norm << '\t' << r.bound_population << '\t' << r.mean_x << '\n';
}

PropagationResult propagate_realization(const Wavefunction& psi0, const Drive& drive,
                                        const StepContext& ctx, const PropagationConfig& cfg,
                                        const PropagationOptions& options) {
  validate(cfg);
  if (!(psi0.grid() == ctx.grid))
    throw std::invalid_argument("propagate: wavefunction and context use different grids");
  if (cfg.dt != ctx.dt) throw std::invalid_argument("propagate: config dt differs from context dt");
  for (const auto& p : drive.pulses)
    if (cfg.t_end < p.duration)
      throw ConfigError("propagation.t_end", "must not end before the pulse does");

  const std::size_t n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  std::size_t n_noise = 0;
  if (drive.noise != nullptr) {
    n_noise = steps_before(drive.noise_window, cfg.dt);
    if (drive.noise->size() < n_noise)
      throw std::invalid_argument("propagate: noise realization shorter than the noise window");
    if (drive.noise->dt != cfg.dt)
      throw std::invalid_argument("propagate: noise sampled with a different dt");
  }

  const double dt = cfg.dt;
  const double x0 = ctx.grid.x_min;
  const double dx = ctx.grid.dx();
  auto field_at = [&](std::size_t s) {
    return total_field(drive.pulses, (static_cast<double>(s) + 0.5) * dt);
  };
  auto kick_at = [&](std::size_t s) { return s < n_noise ? drive.noise->kick(s) : 0.0; };

  PropagationResult result{psi0, {}};
  auto psi = result.final_state.amplitudes();

  auto record = [&](std::size_t completed, double pending_phase) {
    // Close the pending half step on a copy to observe the state at a step boundary.
    Wavefunction probe = result.final_state;
    auto a = probe.amplitudes();
    multiply_diagonal(a, ctx.half_potential, x0, dx, pending_phase);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= ctx.mask[i];
    TraceRecord r;
    r.t = static_cast<double>(completed) * dt;
    r.norm = norm_squared(probe);
    r.mean_x = mean_position(probe);
    if (options.basis != nullptr) {
      double bound = 0.0;
      for (const auto& state : options.basis->states) bound += std::norm(inner_product(state, probe));
      r.bound_population = bound;
    }
    result.trace.push_back(r);
  };

  if (options.trace_every > 0) {
    // t = 0: nothing pending, the identity is exp(i x 0) with unit diagonals
    TraceRecord r{0.0, norm_squared(psi0), 0.0, mean_position(psi0)};
    if (options.basis != nullptr)
      for (const auto& state : options.basis->states) r.bound_population += std::norm(inner_product(state, psi0));
    result.trace.push_back(r);
  }
  if (n_steps == 0) return result;

  double field = field_at(0);
  multiply_diagonal(psi, ctx.half_potential, x0, dx, kick_at(0) + field * dt / 2.0);
  for (std::size_t s = 0; s < n_steps; ++s) {
    kinetic_step(psi, ctx);
    const double closing = field * dt / 2.0;
    if (options.trace_every > 0 && (s + 1) % options.trace_every == 0) record(s + 1, closing);
    if (s + 1 == n_steps) {
      multiply_diagonal(psi, ctx.half_potential, x0, dx, closing);
      for (std::size_t i = 0; i < psi.size(); ++i) psi[i] *= ctx.mask[i];
      break;
    }
    const double next_field = field_at(s + 1);
    multiply_diagonal(psi, ctx.full_potential, x0, dx,
                      closing + kick_at(s + 1) + next_field * dt / 2.0);
    field = next_field;
    if ((s & 1023u) == 1023u && !all_finite(psi))
      throw NumericalBlowupError("propagate: non-finite amplitudes at step " + std::to_string(s));
  }
  if (!all_finite(psi)) throw NumericalBlowupError("propagate: non-finite final amplitudes");
  return result;
}

}  // namespace stochdiss
