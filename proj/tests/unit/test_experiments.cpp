#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "stochdiss/experiments.hpp"

using namespace stochdiss;

namespace {

// Short pulse on a coarse grid: a few seconds per sweep.
RunConfig small_config() {
  auto c = default_config(SweepKind::landscape);
  c.grid.n_points = 512;
  c.pulse.cycles = 1.0;
  c.pulse.omega = 0.02;
  c.propagation.t_end_factor = 1.2;
  c.realizations = 4;
  c.master_seed = 11;
  c.sweep.sqrt_d = {0.2, 0.4};
  c.sweep.f0 = {0.05, 0.1};
  return c;
}

const Model& small_model() {
  static const Model m = prepare_model(small_config());
  return m;
}

std::string text(const Table& t) {
  std::ostringstream os;
  write_table(os, t);
  return os.str();
}

}  // namespace

TEST_CASE("model preparation") {
  const auto& m = small_model();
  CHECK(m.basis.size() == 24);
  CHECK(m.propagation.t_end == doctest::Approx(1.2 * m.pump.duration));
  CHECK(m.pump.amplitude == 0.04);
}

TEST_CASE("scurve at zero field is zero") {
  const double f0[] = {0.0, 0.3};
  const auto s = run_scurve(small_model(), f0);
  REQUIRE(s.size() == 2);
  CHECK(std::abs(s[0].p_laser) < 1e-12);
  CHECK(s[1].p_laser > s[0].p_laser);
}

TEST_CASE("noise sweep is independent of the worker count") {
  const auto& m = small_model();
  SweepHooks one{1, nullptr, {}};
  SweepHooks three{3, nullptr, {}};
  const auto a = run_noise_sweep(m, m.config.sweep.sqrt_d, one);
  const auto b = run_noise_sweep(m, m.config.sweep.sqrt_d, three);
  CHECK(text(enhancement_table(m.config, "noise_sweep", a)) == text(enhancement_table(m.config, "noise_sweep", b)));
  for (const auto& p : a) {
    CHECK(p.p_noise > 0.0);
    CHECK(p.p_both > 0.0);
    CHECK(p.eta == doctest::Approx(enhancement(p.p_laser, p.p_noise, p.p_both).eta));
  }
}

TEST_CASE("landscape cells agree with the single-F0 sweep at the same point") {
  const auto& m = small_model();
  const auto land = run_landscape(m, m.config.sweep.sqrt_d, m.config.sweep.f0, {2, nullptr, {}});
  REQUIRE(land.points.size() == 4);
  auto cfg = m.config;
  cfg.pulse.amplitude = 0.1;
  const auto m2 = prepare_model(cfg);
  const auto line = run_noise_sweep(m2, cfg.sweep.sqrt_d);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(land.at(i, 1).p_both == line[i].p_both);
    CHECK(land.at(i, 1).p_noise == line[i].p_noise);
    CHECK(land.at(i, 1).eta == line[i].eta);
  }
  CHECK(land.peak == peak_index(land.points));
  const auto t = landscape_table(m.config, land);
  CHECK(t.rows.size() == 4);
  CHECK(t.comments.back().rfind("global_max:", 0) == 0);
}

TEST_CASE("resumed sweeps reproduce the table bit for bit") {
  const auto& m = small_model();
  const std::string path = "test_experiments_cache.tmp";
  std::remove(path.c_str());
  std::string first, second;
  std::size_t cached = 0, fresh = 0;
  {
    CellCache cache(path, config_hash(m.config));
    SweepHooks hooks{1, &cache, [&](const CellLog& c) { (c.cached ? cached : fresh)++; }};
    first = text(enhancement_table(m.config, "noise_sweep", run_noise_sweep(m, m.config.sweep.sqrt_d, hooks)));
  }
  CHECK(cached == 0);
  CHECK(fresh == 5);
  {
    CellCache cache(path, config_hash(m.config));
    SweepHooks hooks{1, &cache, [&](const CellLog& c) { (c.cached ? cached : fresh)++; }};
    second = text(enhancement_table(m.config, "noise_sweep", run_noise_sweep(m, m.config.sweep.sqrt_d, hooks)));
  }
  CHECK(cached == 5);
  CHECK(first == second);
  std::remove(path.c_str());
}

TEST_CASE("frmg without a probe absorbs nothing beyond the pump alone") {
  auto cfg = small_config();
  cfg.probe.amplitude = 0.0;
  const auto m = prepare_model(cfg);
  const double w[] = {0.01, 0.02};
  const auto g = run_frmg(m, w);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(std::abs(g.bare[i]) < 1e-10);
    CHECK(g.gain[i] == g.pump_only);
  }
  const auto t = gain_table(cfg, g);
  CHECK(t.rows.size() == 2);
}

TEST_CASE("filtered comparison shares realizations between the curves") {
  auto cfg = small_config();
  cfg.noise.shape = NoiseShape::band_limited;
  cfg.noise.holes = {{0.3, 0.02}};
  cfg.sweep.kind = SweepKind::filtered_compare;
  const auto m = prepare_model(cfg);
  const double sd[] = {0.3};
  const auto cmp = run_filtered_compare(m, sd, {2, nullptr, {}});
  REQUIRE(cmp.broadband.size() == 1);
  REQUIRE(cmp.perforated.size() == 1);
  // A narrow hole far above the molecular frequencies barely changes anything.
  CHECK(cmp.perforated[0].p_both == doctest::Approx(cmp.broadband[0].p_both).epsilon(0.05));
  CHECK(cmp.perforated[0].p_both != cmp.broadband[0].p_both);
  CHECK(filtered_table(cfg, cmp).rows.size() == 1);
}

TEST_CASE("peak index skips floored points") {
  std::vector<EnhancementPoint> pts(3);
  pts[0].eta = 10.0;
  pts[1].eta = 1e9;
  pts[1].floored = true;
  pts[2].eta = 20.0;
  CHECK(peak_index(pts) == 2);
  for (auto& p : pts) p.floored = true;
  CHECK(peak_index(pts) == 1);
}

TEST_CASE("eigen table") {
  const auto t = eigen_table(small_model().basis);
  CHECK(t.rows.size() == 24);
  for (const auto& r : t.rows) CHECK(r[3] < 1e-4);
}
