#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <string>

#include "stochdiss/config.hpp"
#include "stochdiss/errors.hpp"

using namespace stochdiss;

namespace {

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<accepted>";
}

}  // namespace

TEST_CASE("default run settings") {
  const auto c = default_config();
  CHECK(c.pulse.duration() == doctest::Approx(30 * 3.141592653589793 / 0.007).epsilon(1e-14));
  CHECK(c.propagation_config().t_end == doctest::Approx(1.5 * c.pulse.duration()));
  CHECK(c.sweep.sqrt_d.size() == 20);
  CHECK(c.sweep.sqrt_d.front() == 0.002);
  CHECK(c.sweep.sqrt_d.back() == 0.06);
  CHECK(c.sweep.omega_p.size() == 280);
  CHECK(default_config(SweepKind::landscape).sweep.f0.size() == 12);
  const auto f = default_config(SweepKind::filtered_compare);
  CHECK(f.noise.shape == NoiseShape::band_limited);
  CHECK(f.noise.holes.size() == 4);
  CHECK(f.noise.holes[0].width == 0.008);
}

TEST_CASE("configs round-trip losslessly") {
  for (auto kind : {SweepKind::scurve, SweepKind::noise_sweep, SweepKind::landscape, SweepKind::frmg,
                    SweepKind::filtered_compare}) {
    auto c = default_config(kind);
    c.master_seed = 0xfedcba9876543210ULL;
    c.noise.sqrt_d = 0.1 / 3.0;
    c.workers = 3;
    c.output_dir = "some/where";
    const auto back = parse_config(to_json_text(c));
    CHECK(back == c);
    CHECK(to_json_text(back) == to_json_text(c));
  }
  RunConfig explicit_molecule = default_config();
  explicit_molecule.molecule = {"", {1000.0, 0.2, 1.1}};
  CHECK(parse_config(to_json_text(explicit_molecule)) == explicit_molecule);
}

TEST_CASE("partial documents take defaults") {
  const auto c = parse_config(R"({"molecule": "hcl", "pulse": {"F0": 0.05}, "sweep": {"kind": "scurve"}})");
  CHECK(c.molecule.params == morse_preset("hcl"));
  CHECK(c.pulse.amplitude == 0.05);
  CHECK(c.pulse.omega == 0.007);
  CHECK(c.sweep.kind == SweepKind::scurve);
  CHECK(c.sweep.f0 == default_f0_axis(SweepKind::scurve));
}

TEST_CASE("axis generators") {
  const auto c = parse_config(
      R"({"sweep": {"kind": "landscape", "sqrt_D": {"from": 0.001, "to": 0.1, "count": 3, "log": true},
                    "F0": {"from": 0.0, "to": 0.1, "count": 5}}})");
  REQUIRE(c.sweep.sqrt_d.size() == 3);
  CHECK(c.sweep.sqrt_d[1] == doctest::Approx(0.01).epsilon(1e-14));
  REQUIRE(c.sweep.f0.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(c.sweep.f0[i] == doctest::Approx(0.025 * i).epsilon(1e-15));
  CHECK(c.sweep.f0.back() == 0.1);
}

TEST_CASE("validation names the offending field") {
  CHECK(field_of(R"({"molecule": {"mass": 1744.59, "De": -0.225, "beta": 1.1741}})") == "molecule.De");
  CHECK(field_of(R"({"molecule": {"preset": "hf", "De": -0.2}})") == "molecule.De");
  CHECK(field_of(R"({"molecule": "argon"})") == "molecule.preset");
  CHECK(field_of(R"({"grid": {"n_points": 1000}})") == "grid.n_points");
  CHECK(field_of(R"({"propagation": {"dt": -0.1}})") == "propagation.dt");
  CHECK(field_of(R"({"propagation": {"absorber_start": 0.3}})") == "propagation.absorber_start");
  CHECK(field_of(R"({"sweep": {"sqrt_D": [0.02, 0.01]}})") == "sweep.sqrt_D");
  CHECK(field_of(R"({"sweep": {"sqrt_D": []}})") == "sweep.sqrt_D");
  CHECK(field_of(R"({"sweep": {"kind": "spiral"}})") == "sweep.kind");
  CHECK(field_of(R"({"pulse": {"omega": "fast"}})") == "pulse.omega");
  CHECK(field_of(R"({"pulse": {"colour": 1}})") == "pulse.colour");
  CHECK(field_of(R"({"ensemble": {"realizations": 0}})") == "ensemble.realizations");
  CHECK(field_of(R"({"noise": {"shape": "band_limited", "holes": [{"center": 2.0, "width": 0.1}]}})") ==
        "noise.holes[0]");
  CHECK(field_of(R"({"noise": {"holes": [{"center": 0.02, "width": 0.008}]}})") == "noise.holes");
  CHECK(field_of("{not json") == "");
}

TEST_CASE("hole shorthand expands to the level gaps") {
  const auto c =
      parse_config(R"({"noise": {"shape": "band_limited", "holes": {"resonances": 2, "width": 0.004}}})");
  REQUIRE(c.noise.holes.size() == 2);
  CHECK(c.noise.holes[1].width == 0.004);
  CHECK(c.noise.holes[0].center == doctest::Approx(0.0180664918142103).epsilon(1e-12));
}

TEST_CASE("config hash covers results, not placement") {
  auto a = default_config();
  auto b = a;
  b.workers = 7;
  b.output_dir = "elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.master_seed += 1;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("load_config reads files") {
  const std::string path = "test_config_tmp.json";
  {
    std::ofstream out(path);
    out << R"({"ensemble": {"realizations": 7, "master_seed": 5}})";
  }
  const auto c = load_config(path);
  CHECK(c.realizations == 7);
  CHECK(c.master_seed == 5);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config("does/not/exist.json"), ConfigError);
}
