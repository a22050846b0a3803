#include "stochdiss/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "stochdiss/config.hpp"
#include "stochdiss/errors.hpp"
#include "stochdiss/experiments.hpp"
#include "stochdiss/parallel.hpp"
#include "stochdiss/rng.hpp"

namespace stochdiss {

namespace {

namespace fs = std::filesystem;

// Conversion factors from atomic units (CODATA 2018).
constexpr double kFemtosecondsPerAu = 2.4188843265857e-2;
constexpr double kEvPerHartree = 27.211386245988;
constexpr double kWavenumberPerHartree = 219474.6313632;
constexpr double kVoltPerMetrePerAu = 5.14220674763e11;
constexpr double kWattPerCm2PerAuSquared = 3.50944758e16;  // cycle-averaged for peak field 1 a.u.
constexpr double kAngstromPerBohr = 0.529177210903;

struct Overrides {
  std::string config_path;
  std::optional<std::string> molecule;
  std::optional<std::size_t> workers;
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> realizations;
  std::optional<std::size_t> n_points;
  std::optional<double> dt;
  std::optional<double> f0;
  std::optional<double> sqrt_d;
  std::vector<double> sqrt_d_axis;
  std::vector<double> f0_axis;
  std::vector<double> omega_p_axis;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("-c,--config", o.config_path, "JSON run configuration");
  app->add_option("--molecule", o.molecule, "molecule preset (hf, hcl, h2)");
  app->add_option("-w,--workers", o.workers, "worker threads (default: STOCHDISS_WORKERS or all cores)");
  app->add_option("-o,--output", o.output, "output directory");
  app->add_option("--seed", o.seed, "master seed");
  app->add_option("-n,--realizations", o.realizations, "realizations per ensemble");
  app->add_option("--n-points", o.n_points, "grid points");
  app->add_option("--dt", o.dt, "time step [a.u.]");
  app->add_option("--f0", o.f0, "pump amplitude [a.u.]");
}

RunConfig resolve(SweepKind kind, const Overrides& o) {
  RunConfig c = o.config_path.empty() ? default_config(kind) : load_config(o.config_path);
  if (o.config_path.empty()) c.sweep.kind = kind;
  if (o.molecule) {
    c.molecule.preset = *o.molecule;
    c.molecule.params = morse_preset(*o.molecule);
    if (kind == SweepKind::filtered_compare) c.noise.holes = resonance_holes(c.molecule.params, 4, 0.008);
  }
  if (o.workers) c.workers = *o.workers;
  if (o.output) c.output_dir = *o.output;
  if (o.seed) c.master_seed = *o.seed;
  if (o.realizations) c.realizations = *o.realizations;
  if (o.n_points) c.grid.n_points = *o.n_points;
  if (o.dt) c.propagation.dt = *o.dt;
  if (o.f0) c.pulse.amplitude = *o.f0;
  if (o.sqrt_d) c.noise.sqrt_d = *o.sqrt_d;
  if (!o.sqrt_d_axis.empty()) c.sweep.sqrt_d = o.sqrt_d_axis;
  if (!o.f0_axis.empty()) c.sweep.f0 = o.f0_axis;
  if (!o.omega_p_axis.empty()) c.sweep.omega_p = o.omega_p_axis;
  c.sweep.kind = kind;
  if (kind == SweepKind::filtered_compare) c.noise.shape = NoiseShape::band_limited;
  validate(c);
  return c;
}

std::size_t workers_for(const RunConfig& c) { return c.workers > 0 ? c.workers : default_worker_count(); }

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", std::localtime(&now));
  return buf;
}

// Files of one sweep: <dir>/<name>.tsv, .cache and .log.
struct SweepFiles {
  fs::path table;
  std::unique_ptr<CellCache> cache;
  std::ofstream log;
  SweepHooks hooks;
};

std::unique_ptr<SweepFiles> open_sweep(const RunConfig& c, const std::string& name) {
  auto f = std::make_unique<SweepFiles>();
  fs::create_directories(c.output_dir);
  const fs::path dir(c.output_dir);
  f->table = dir / (name + ".tsv");
  f->cache = std::make_unique<CellCache>((dir / (name + ".cache")).string(), config_hash(c));
  f->log.open(dir / (name + ".log"), std::ios::app);
  f->log << timestamp() << " start " << name << " hash " << config_hash(c) << " workers "
         << workers_for(c) << " cached_cells " << f->cache->size() << '\n';
  f->hooks.workers = workers_for(c);
  f->hooks.cache = f->cache.get();
  auto* log = &f->log;
  f->hooks.on_cell = [log](const CellLog& cell) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s %s mean=%.6e stderr=%.3e wall=%.1fs%s", timestamp().c_str(),
                  cell.key.c_str(), cell.mean, cell.std_error, cell.seconds, cell.cached ? " (cached)" : "");
    *log << buf << std::endl;
    std::cerr << buf << '\n';
  };
  return f;
}

void finish(SweepFiles& f, const Table& t) {
  write_table_file(f.table.string(), t);
  f.log << timestamp() << " wrote " << f.table.string() << '\n';
  std::cout << f.table.string() << '\n';
}

int cmd_eigen(const Overrides& o, const std::string& out_path) {
  RunConfig c = o.config_path.empty() ? default_config() : load_config(o.config_path);
  if (o.molecule) {
    c.molecule.preset = *o.molecule;
    c.molecule.params = morse_preset(*o.molecule);
  }
  if (o.n_points) c.grid.n_points = *o.n_points;
  validate(c);
  const auto basis = solve_bound_states(c.molecule.params, c.grid_spec());
  const auto t = eigen_table(basis);
  if (out_path.empty()) {
    write_table(std::cout, t);
  } else {
    write_table_file(out_path, t);
    std::cout << out_path << '\n';
  }
  return 0;
}

int cmd_propagate(const Overrides& o, std::size_t realization, const std::string& trace_path,
                  std::size_t trace_every, const std::string& noise_path) {
  const RunConfig c = resolve(SweepKind::noise_sweep, o);
  const Model m = prepare_model(c);
  const std::vector<LaserPulse> pulses{m.pump};
  std::optional<NoiseRealization> noise;
  Drive drive{pulses, nullptr, 0.0};
  const std::uint64_t cell = noise_cell(c.noise.sqrt_d);
  const std::uint64_t seed = stream_seed(c.master_seed, cell, realization);
  if (c.noise.sqrt_d > 0.0) {
    NoiseSpec spec{c.noise.sqrt_d * c.noise.sqrt_d, seed, c.noise.shape, c.noise.bandwidth, c.noise.holes};
    noise = sample_noise(spec, steps_before(m.pump.duration, m.propagation.dt), m.propagation.dt);
    drive.noise = &*noise;
    drive.noise_window = m.pump.duration;
    if (!noise_path.empty()) {
      std::ofstream nf(noise_path);
      write_noise_trace(nf, *noise);
    }
  }
  PropagationOptions opts{trace_path.empty() ? 0 : trace_every, &m.basis};
  const auto res = propagate_realization(m.basis.states.front(), drive, m.context, m.propagation, opts);
  if (!trace_path.empty()) {
    std::ofstream tf(trace_path);
    write_trace(tf, res.trace);
  }
  const double p = dissociation_probability(res.final_state, m.basis);
  std::printf("# %s\n# config_hash: %s\n", kVersionTag, config_hash(c).c_str());
  std::printf("F0[a.u.]\tsqrt_D[a.u.]\trealization\tseed\tP_d\tnorm\tabsorbed_energy[hartree]\n");
  std::printf("%.17g\t%.17g\t%zu\t%llu\t%.17g\t%.17g\t%.17g\n", c.pulse.amplitude, c.noise.sqrt_d, realization,
              static_cast<unsigned long long>(c.noise.sqrt_d > 0.0 ? seed : 0), p,
              norm_squared(res.final_state), absorbed_energy(res.final_state, m.basis, m.basis.energies[0]));
  return 0;
}

int cmd_units() {
  std::printf("quantity\tatomic_units\tconverted\n");
  std::printf("time\t1\t%.10g fs\n", kFemtosecondsPerAu);
  std::printf("energy\t1\t%.10g eV\n", kEvPerHartree);
  std::printf("energy\t1\t%.10g cm^-1\n", kWavenumberPerHartree);
  std::printf("length\t1\t%.10g angstrom\n", kAngstromPerBohr);
  std::printf("field\t1\t%.10g V/m\n", kVoltPerMetrePerAu);
  std::printf("intensity(F0=1)\t1\t%.10g W/cm^2\n", kWattPerCm2PerAuSquared);
  const PulseConfig p;
  std::printf("pump omega\t%.6g\t%.6g eV, wavelength %.6g um\n", p.omega, p.omega * kEvPerHartree,
              2 * 3.14159265358979 * 137.035999084 / p.omega * kAngstromPerBohr * 1e-4);
  std::printf("pump Tp\t%.6g\t%.6g fs\n", p.duration(), p.duration() * kFemtosecondsPerAu);
  std::printf("pump F0\t%.6g\t%.6g W/cm^2\n", p.amplitude,
              p.amplitude * p.amplitude * kWattPerCm2PerAuSquared);
  const auto hf = morse_preset("hf");
  std::printf("HF E1-E0\t%.6g\t%.6g cm^-1\n", analytic_energy(hf, 1) - analytic_energy(hf, 0),
              (analytic_energy(hf, 1) - analytic_energy(hf, 0)) * kWavenumberPerHartree);
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Noise-enhanced dissociation of Morse molecules by split-operator wavepacket propagation"};
  app.require_subcommand(1);
  Overrides o;

  std::string eigen_out;
  auto* eigen = app.add_subcommand("eigen", "bound-state energies, numeric against analytic");
  add_common(eigen, o);
  eigen->add_option("--out", eigen_out, "write the table here instead of stdout");

  std::size_t realization = 0, trace_every = 100;
  std::string trace_path, noise_path;
  auto* propagate = app.add_subcommand("propagate", "one realization at the configured F0 and sqrt(D)");
  add_common(propagate, o);
  propagate->add_option("--sqrt-d", o.sqrt_d, "noise amplitude sqrt(D) [a.u.]");
  propagate->add_option("-r,--realization", realization, "realization index");
  propagate->add_option("--trace", trace_path, "write (t, norm, bound population, <x>) here");
  propagate->add_option("--trace-every", trace_every, "steps between trace records");
  propagate->add_option("--noise-trace", noise_path, "write the sampled (t, xi) here");

  auto* scurve = app.add_subcommand("scurve", "laser-only dissociation against F0");
  add_common(scurve, o);
  scurve->add_option("--f0-axis", o.f0_axis, "F0 values");

  auto* noise_sweep = app.add_subcommand("noise-sweep", "P_L, P_N, P_LN and eta against sqrt(D)");
  add_common(noise_sweep, o);
  noise_sweep->add_option("--sqrt-d-axis", o.sqrt_d_axis, "sqrt(D) values");

  auto* landscape = app.add_subcommand("landscape", "eta over the (sqrt(D), F0) plane");
  add_common(landscape, o);
  landscape->add_option("--sqrt-d-axis", o.sqrt_d_axis, "sqrt(D) values");
  landscape->add_option("--f0-axis", o.f0_axis, "F0 values");

  auto* frmg = app.add_subcommand("frmg", "pump-probe gain against probe frequency");
  add_common(frmg, o);
  frmg->add_option("--omega-p-axis", o.omega_p_axis, "probe frequencies");

  auto* filtered = app.add_subcommand("filtered-compare", "eta for broadband against perforated noise");
  add_common(filtered, o);
  filtered->add_option("--sqrt-d-axis", o.sqrt_d_axis, "sqrt(D) values");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate-config", "check a configuration file");
  validate_cmd->add_option("config", validate_path, "JSON run configuration")->required();

  auto* show = app.add_subcommand("show-config", "print the resolved configuration");
  add_common(show, o);
  std::string show_kind = "noise_sweep";
  show->add_option("--kind", show_kind, "sweep kind");

  app.add_subcommand("units", "atomic-unit conversions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "eigen") return cmd_eigen(o, eigen_out);
    if (name == "propagate") return cmd_propagate(o, realization, trace_path, trace_every, noise_path);
    if (name == "units") return cmd_units();
    if (name == "validate-config") {
      const auto c = load_config(validate_path);
      std::cout << "ok " << validate_path << " hash " << config_hash(c) << '\n';
      return 0;
    }
    if (name == "show-config") {
      std::cout << to_json_text(resolve(sweep_kind_from_string(show_kind), o)) << '\n';
      return 0;
    }

    const SweepKind kind = name == "scurve"        ? SweepKind::scurve
                           : name == "noise-sweep" ? SweepKind::noise_sweep
                           : name == "landscape"   ? SweepKind::landscape
                           : name == "frmg"        ? SweepKind::frmg
                                                   : SweepKind::filtered_compare;
    const RunConfig c = resolve(kind, o);
    const Model m = prepare_model(c);
    auto files = open_sweep(c, to_string(kind));
    switch (kind) {
      case SweepKind::scurve:
        finish(*files, scurve_table(c, run_scurve(m, c.sweep.f0, files->hooks)));
        break;
      case SweepKind::noise_sweep:
        finish(*files, enhancement_table(c, "noise_sweep", run_noise_sweep(m, c.sweep.sqrt_d, files->hooks)));
        break;
      case SweepKind::landscape:
        finish(*files, landscape_table(c, run_landscape(m, c.sweep.sqrt_d, c.sweep.f0, files->hooks)));
        break;
      case SweepKind::frmg:
        finish(*files, gain_table(c, run_frmg(m, c.sweep.omega_p, files->hooks)));
        break;
      case SweepKind::filtered_compare:
        finish(*files, filtered_table(c, run_filtered_compare(m, c.sweep.sqrt_d, files->hooks)));
        break;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const NumericalBlowupError& e) {
    std::cerr << "error: numerical blowup: " << e.what() << '\n';
    return 3;
  } catch (const GridTooSmallError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace stochdiss
