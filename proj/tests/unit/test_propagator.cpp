#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "stochdiss/errors.hpp"
#include "stochdiss/observables.hpp"
#include "stochdiss/parallel.hpp"
#include "stochdiss/propagator.hpp"

using namespace stochdiss;

namespace {

const GridSpec& grid() {
  static const GridSpec g = make_grid(-2.0, 38.0, 1024);
  return g;
}

const BoundStateBasis& basis() {
  static const BoundStateBasis b = solve_bound_states(morse_preset("hf"), grid());
  return b;
}

PropagationConfig config(double t_end, bool absorber = true, double dt = 0.1) {
  PropagationConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.absorber = absorber;
  return cfg;
}

Wavefunction packet(const GridSpec& g, double x0, double sigma, double p0) {
  Wavefunction psi(g);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double x = g.x(i) - x0;
    psi[i] = std::exp(-x * x / (4 * sigma * sigma)) * std::polar(1.0, p0 * g.x(i));
  }
  psi *= 1.0 / std::sqrt(norm_squared(psi));
  return psi;
}

double norm_inside(const Wavefunction& psi, double x_limit) {
  double s = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    if (psi.grid().x(i) < x_limit) s += std::norm(psi[i]);
  return s * psi.grid().dx();
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS(validate(config(-1.0)), ConfigError);
  CHECK_THROWS_AS(validate(config(10.0, true, 0.0)), ConfigError);
  auto cfg = config(10.0);
  cfg.absorber_start = 0.4;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  // The deep inner wall at x = -2 makes a 0.2 a.u. step alias.
  CHECK_THROWS_AS(make_step_context(morse_preset("hf"), grid(), config(10.0, true, 0.5)), ConfigError);
}

TEST_CASE("step context factors") {
  const auto ctx = make_step_context(morse_preset("hf"), grid(), config(10.0));
  const double n = static_cast<double>(grid().n_points);
  for (const auto& k : ctx.kinetic) CHECK(std::abs(std::abs(k) * n - 1.0) < 1e-15);
  for (const auto& h : ctx.half_potential) CHECK(std::abs(std::abs(h) - 1.0) < 1e-15);
  std::size_t ones = 0;
  for (std::size_t i = 0; i < ctx.mask.size(); ++i) {
    CHECK(ctx.mask[i] > 0.0);
    CHECK(ctx.mask[i] <= 1.0);
    if (grid().x(i) <= 28.0) CHECK(ctx.mask[i] == 1.0);
    if (ctx.mask[i] == 1.0) ++ones;
  }
  CHECK(ones == 769);
  const auto off = make_step_context(morse_preset("hf"), grid(), config(10.0, false));
  for (double m : off.mask) CHECK(m == 1.0);
}

TEST_CASE("the ground state is stationary under one step") {
  const auto ctx = make_step_context(morse_preset("hf"), grid(), config(10.0));
  const auto& psi0 = basis().states[0];
  const auto psi1 = step(psi0, ctx, 0.0, 0.0);
  CHECK(std::norm(inner_product(psi0, psi1)) > 1.0 - 1e-10);
  // and the phase advances by E0 dt
  CHECK(std::arg(inner_product(psi0, psi1)) == doctest::Approx(-basis().energies[0] * 0.1).epsilon(1e-8));
}

TEST_CASE("norm is preserved per step without the absorber") {
  const auto ctx = make_step_context(morse_preset("hf"), grid(), config(10.0, false));
  auto psi = packet(grid(), 2.0, 0.3, 4.0);
  for (double field : {0.0, 0.04, -0.3}) {
    for (int i = 0; i < 5; ++i) {
      const double before = norm_squared(psi);
      psi = step(psi, ctx, field, 0.01);
      CHECK(std::abs(norm_squared(psi) - before) < 1e-12);
    }
  }
}

TEST_CASE("the absorber never increases the norm") {
  const auto ctx = make_step_context(morse_preset("hf"), grid(), config(10.0));
  auto psi = packet(grid(), 30.0, 1.0, 10.0);
  for (int i = 0; i < 20; ++i) {
    const double before = norm_squared(psi);
    psi = step(psi, ctx, 0.02, 0.0);
    CHECK(norm_squared(psi) <= before);
  }
}

TEST_CASE("a noise kick translates the momentum") {
  // Free particle: with V = 0 and F = 0 only the kick moves <p>.
  const auto& g = grid();
  const double mass = morse_preset("hf").mass;
  const auto ctx = make_step_context(g, mass, std::vector<double>(g.n_points, 0.0), config(10.0));
  const auto psi = packet(g, 10.0, 1.0, 2.0);
  const double p_before = mean_momentum(psi);
  const NoiseSpec spec{4e-4, 5, NoiseShape::white, 1.0, {}};
  const auto noise = sample_white_noise(spec, 8, 0.1);
  for (std::size_t s = 0; s < noise.size(); ++s) {
    const double kick = noise.kick(s);
    const auto after = step(psi, ctx, 0.0, kick);
    CHECK(std::abs(mean_momentum(after) - p_before - kick) < 1e-10);
  }
  const auto big = step(psi, ctx, 0.0, 3.0);
  CHECK(std::abs(mean_momentum(big) - p_before - 3.0) < 1e-10);
}

TEST_CASE("non-finite input is reported as a blowup") {
  const auto ctx = make_step_context(morse_preset("hf"), grid(), config(10.0));
  auto psi = basis().states[0];
  psi[100] = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(step(psi, ctx, 0.0, 0.0), NumericalBlowupError);
}

TEST_CASE("the fused loop equals repeated literal steps") {
  const auto g = make_grid(-2.0, 38.0, 256);
  const auto hf = morse_preset("hf");
  const auto cfg = config(60.0);
  const auto ctx = make_step_context(hf, g, cfg);
  const std::vector<LaserPulse> pulses{{0.3, 0.05, 0.4, 50.0}, {0.05, 0.11, 0.0, 40.0}};
  NoiseSpec spec{0.01, 77, NoiseShape::white, 1.0, {}};
  const auto noise = sample_white_noise(spec, 500, cfg.dt);
  const double window = 35.05;
  const Drive drive{pulses, &noise, window};

  const auto psi0 = packet(g, 0.3, 0.2, 1.0);
  const auto fused = propagate_realization(psi0, drive, ctx, cfg).final_state;

  Wavefunction literal = psi0;
  const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  const auto n_noise = steps_before(window, cfg.dt);
  CHECK(n_noise == 351);
  for (std::size_t s = 0; s < n_steps; ++s) {
    const double f = total_field(pulses, (s + 0.5) * cfg.dt);
    literal = step(literal, ctx, f, s < n_noise ? noise.kick(s) : 0.0);
  }
  double dev = 0.0;
  for (std::size_t i = 0; i < g.n_points; ++i) dev = std::max(dev, std::abs(fused[i] - literal[i]));
  CHECK(dev < 1e-11);
  CHECK(norm_squared(fused) < 1.0);
}

TEST_CASE("propagation rejects inconsistent inputs") {
  const auto ctx = make_step_context(morse_preset("hf"), grid(), config(10.0));
  const LaserPulse long_pulse{0.01, 0.007, 0.0, 100.0};
  const std::vector<LaserPulse> pulses{long_pulse};
  CHECK_THROWS_AS(propagate_realization(basis().states[0], Drive{pulses, nullptr, 0.0}, ctx, config(10.0)),
                  ConfigError);
  NoiseSpec spec{1e-4, 1, NoiseShape::white, 1.0, {}};
  const auto short_noise = sample_white_noise(spec, 10, 0.1);
  CHECK_THROWS_AS(propagate_realization(basis().states[0], Drive{{}, &short_noise, 5.0}, ctx, config(10.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(propagate_realization(basis().states[0], Drive{}, ctx, config(10.0, true, 0.05)),
                  std::invalid_argument);
}

TEST_CASE("unitarity over 1e4 steps under a strong field") {
  const auto cfg = config(1000.0, false);
  const auto ctx = make_step_context(morse_preset("hf"), grid(), cfg);
  for (double f0 : {0.0, 0.04, 0.12}) {
    const std::vector<LaserPulse> pulses{{f0, 0.007, 0.0, 1000.0}};
    const auto out = propagate_realization(basis().states[0], Drive{pulses, nullptr, 0.0}, ctx, cfg);
    CHECK(std::abs(norm_squared(out.final_state) - 1.0) < 1e-10);
  }
}

TEST_CASE("field-free evolution keeps the ground state") {
  const auto cfg = config(2000.0);
  const auto ctx = make_step_context(morse_preset("hf"), grid(), cfg);
  const auto out = propagate_realization(basis().states[0], Drive{}, ctx, cfg);
  CHECK(std::norm(inner_product(basis().states[0], out.final_state)) > 1.0 - 1e-8);
}

TEST_CASE("an outgoing packet is absorbed without reflection") {
  const auto hf = morse_preset("hf");
  const auto cfg = config(6000.0);
  const auto ctx = make_step_context(hf, grid(), cfg);
  // E ~ 0.05 hartree, v ~ 0.0076 bohr per a.u.
  const auto psi = packet(grid(), 18.0, 1.0, std::sqrt(2 * hf.mass * 0.05));
  REQUIRE(norm_inside(psi, 28.0) > 0.999);
  const auto out = propagate_realization(psi, Drive{}, ctx, cfg).final_state;
  CHECK(norm_squared(out) < 1e-4);
  CHECK(norm_inside(out, 28.0) < 1e-4);
}

TEST_CASE("trace records") {
  const auto cfg = config(10.0);
  const auto ctx = make_step_context(morse_preset("hf"), grid(), cfg);
  PropagationOptions opts{25, &basis()};
  const auto out = propagate_realization(basis().states[0], Drive{}, ctx, cfg, opts);
  REQUIRE(out.trace.size() == 5);
  CHECK(out.trace[0].t == 0.0);
  CHECK(out.trace[4].t == doctest::Approx(10.0));
  for (const auto& r : out.trace) {
    CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.bound_population == doctest::Approx(1.0).epsilon(1e-10));
  }
  std::ostringstream os;
  write_trace(os, out.trace);
  CHECK(os.str().rfind("# t", 0) == 0);
}

TEST_CASE("time-step refinement of pure noise driving agrees within ensemble error") {
  const auto hf = morse_preset("hf");
  const double window = 2000.0;
  auto mean_for = [&](double dt) {
    const auto cfg = config(3000.0, true, dt);
    const auto ctx = make_step_context(hf, grid(), cfg);
    EnsembleSetup setup;
    setup.basis = &basis();
    setup.context = &ctx;
    setup.propagation = cfg;
    setup.noise = NoiseSpec{0.15 * 0.15, 0, NoiseShape::white, 1.0, {}};
    setup.noise_window = window;
    setup.master_seed = dt < 0.075 ? 2 : 1;
    return run_ensemble(setup, 16, default_worker_count());
  };
  const auto coarse = mean_for(0.1);
  const auto fine = mean_for(0.05);
  MESSAGE("coarse " << coarse.mean << " +- " << coarse.std_error << ", fine " << fine.mean
                    << " +- " << fine.std_error);
  CHECK(coarse.mean > 0.0);
  const double se = std::hypot(coarse.std_error, fine.std_error);
  CHECK(std::abs(coarse.mean - fine.mean) < 2.0 * se);
}
