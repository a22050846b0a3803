#include "stochdiss/experiments.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>

#include "stochdiss/parallel.hpp"
#include "stochdiss/rng.hpp"

namespace stochdiss {

namespace {

std::string hex(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

// One ensemble to evaluate inside a batch.
struct Job {
  std::string key;
  EnsembleSetup setup;
  std::size_t n = 1;
};

EnsembleSetup base_setup(const Model& model) {
  EnsembleSetup s;
  s.basis = &model.basis;
  s.context = &model.context;
  s.propagation = model.propagation;
  s.master_seed = model.config.master_seed;
  return s;
}

NoiseSpec noise_spec(const Model& model, double sqrt_d, bool with_holes) {
  const auto& n = model.config.noise;
  NoiseSpec spec{sqrt_d * sqrt_d, 0, n.shape, n.bandwidth, {}};
  if (with_holes) spec.holes = n.holes;
  return spec;
}

Job laser_job(const Model& model, double f0) {
  Job job{"L|f0=" + hex(f0), base_setup(model), 1};
  LaserPulse pump = model.pump;
  pump.amplitude = f0;
  job.setup.pulses = {pump};
  return job;
}

Job noise_job(const Model& model, const std::string& tag, double sqrt_d, std::optional<double> f0,
              bool with_holes) {
  Job job{tag + "|sd=" + hex(sqrt_d), base_setup(model), model.config.realizations};
  job.setup.noise = noise_spec(model, sqrt_d, with_holes);
  job.setup.noise_window = model.pump.duration;
  job.setup.cell = noise_cell(sqrt_d);
  if (f0) {
    LaserPulse pump = model.pump;
    pump.amplitude = *f0;
    job.setup.pulses = {pump};
    job.key += "|f0=" + hex(*f0);
  }
  return job;
}

// Runs every (job, realization) pair of the batch as one flat task list,
// then summarises each job in realization order.
std::vector<EnsembleResult> run_batch(const std::vector<Job>& jobs, const SweepHooks& hooks) {
  using clock = std::chrono::steady_clock;
  std::vector<EnsembleResult> results(jobs.size());
  std::vector<std::optional<std::vector<double>>> cached(jobs.size());
  std::vector<std::size_t> offsets;
  std::vector<std::size_t> owner;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (hooks.cache != nullptr) cached[j] = hooks.cache->find(jobs[j].key);
    if (cached[j] && cached[j]->size() != jobs[j].n) cached[j].reset();
    offsets.push_back(owner.size());
    if (cached[j]) continue;
    const std::size_t tasks = is_deterministic(jobs[j].setup) ? 1 : jobs[j].n;
    for (std::size_t r = 0; r < tasks; ++r) owner.push_back(j);
  }

  const auto start = clock::now();
  std::vector<DissociationRecord> flat(owner.size());
  parallel_for(owner.size(), hooks.workers, [&](std::size_t t) {
    const std::size_t j = owner[t];
    flat[t] = run_realization(jobs[j].setup, t - offsets[j]);
  });
  const double seconds = std::chrono::duration<double>(clock::now() - start).count();

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    std::vector<DissociationRecord> records(jobs[j].n);
    if (cached[j]) {
      for (std::size_t r = 0; r < jobs[j].n; ++r) {
        const bool stochastic = !is_deterministic(jobs[j].setup);
        const auto seed = stochastic ? stream_seed(jobs[j].setup.master_seed, jobs[j].setup.cell, r) : 0;
        records[r] = {r, (*cached[j])[r], seed};
      }
    } else if (is_deterministic(jobs[j].setup)) {
      for (std::size_t r = 0; r < jobs[j].n; ++r) records[r] = {r, flat[offsets[j]].probability, 0};
    } else {
      for (std::size_t r = 0; r < jobs[j].n; ++r) records[r] = flat[offsets[j] + r];
    }
    results[j] = summarize(std::move(records));
    if (!cached[j] && hooks.cache != nullptr) {
      std::vector<double> values;
      for (const auto& rec : results[j].records) values.push_back(rec.probability);
      hooks.cache->store(jobs[j].key, values);
    }
    if (hooks.on_cell)
      hooks.on_cell({jobs[j].key, results[j].mean, results[j].std_error, cached[j] ? 0.0 : seconds,
                     cached[j].has_value()});
  }
  return results;
}

EnhancementPoint make_point(double sqrt_d, double f0, const EnsembleResult& l, const EnsembleResult& n,
                            const EnsembleResult& ln) {
  const auto e = enhancement(l.mean, n.mean, ln.mean);
  return {sqrt_d, f0, l.mean, n.mean, ln.mean, n.std_error, ln.std_error, e.eta, e.floored};
}

std::vector<EnhancementPoint> sweep(const Model& model, std::span<const double> sqrt_d_values,
                                    const std::string& tag, bool with_holes, const EnsembleResult& laser,
                                    const SweepHooks& hooks) {
  std::vector<EnhancementPoint> out;
  const double f0 = model.pump.amplitude;
  for (double sd : sqrt_d_values) {
    const auto r = run_batch({noise_job(model, tag + "N", sd, std::nullopt, with_holes),
                              noise_job(model, tag + "LN", sd, f0, with_holes)},
                             hooks);
    out.push_back(make_point(sd, f0, laser, r[0], r[1]));
  }
  return out;
}

std::vector<std::string> base_comments(const RunConfig& cfg, const std::string& name) {
  return provenance_comments(cfg, name);
}

}  // namespace

Model prepare_model(const RunConfig& config) {
  validate(config);
  Model m;
  m.config = config;
  m.grid = config.grid_spec();
  m.basis = solve_bound_states(config.molecule.params, m.grid);
  m.propagation = config.propagation_config();
  m.context = make_step_context(config.molecule.params, m.grid, m.propagation);
  m.pump = config.pulse.pulse();
  return m;
}

std::uint64_t noise_cell(double sqrt_d) { return std::bit_cast<std::uint64_t>(sqrt_d); }

std::vector<ScurvePoint> run_scurve(const Model& model, std::span<const double> f0_values,
                                    const SweepHooks& hooks) {
  std::vector<Job> jobs;
  for (double f0 : f0_values) jobs.push_back(laser_job(model, f0));
  const auto r = run_batch(jobs, hooks);
  std::vector<ScurvePoint> out;
  for (std::size_t i = 0; i < f0_values.size(); ++i) out.push_back({f0_values[i], r[i].mean});
  return out;
}

std::vector<EnhancementPoint> run_noise_sweep(const Model& model, std::span<const double> sqrt_d_values,
                                              const SweepHooks& hooks) {
  const auto laser = run_batch({laser_job(model, model.pump.amplitude)}, hooks).front();
  return sweep(model, sqrt_d_values, "", !model.config.noise.holes.empty(), laser, hooks);
}

Landscape run_landscape(const Model& model, std::span<const double> sqrt_d_values,
                        std::span<const double> f0_values, const SweepHooks& hooks) {
  Landscape out;
  out.sqrt_d.assign(sqrt_d_values.begin(), sqrt_d_values.end());
  out.f0.assign(f0_values.begin(), f0_values.end());
  std::vector<Job> laser_jobs;
  for (double f0 : f0_values) laser_jobs.push_back(laser_job(model, f0));
  const auto lasers = run_batch(laser_jobs, hooks);
  const bool holes = !model.config.noise.holes.empty();
  for (double sd : sqrt_d_values) {
    std::vector<Job> jobs{noise_job(model, "N", sd, std::nullopt, holes)};
    for (double f0 : f0_values) jobs.push_back(noise_job(model, "LN", sd, f0, holes));
    const auto r = run_batch(jobs, hooks);
    for (std::size_t j = 0; j < f0_values.size(); ++j)
      out.points.push_back(make_point(sd, f0_values[j], lasers[j], r[0], r[j + 1]));
  }
  out.peak = peak_index(out.points);
  return out;
}

LaserPulse probe_pulse(const Model& model, double omega_p) {
  return {model.config.probe.amplitude, omega_p, model.config.probe.phase, model.pump.duration};
}

GainProfile run_frmg(const Model& model, std::span<const double> omega_p_values, const SweepHooks& hooks) {
  using clock = std::chrono::steady_clock;
  GainProfile out;
  out.omega_p.assign(omega_p_values.begin(), omega_p_values.end());
  out.probe_amplitude = model.config.probe.amplitude;
  out.pump = model.pump;
  const double e0 = model.basis.energies.front();

  // Task 0 is pump alone; then (bare, pumped) per probe frequency.
  const std::size_t n = omega_p_values.size();
  std::vector<std::string> keys{"G|pump"};
  for (double w : omega_p_values) {
    keys.push_back("G|bare|w=" + hex(w));
    keys.push_back("G|pumped|w=" + hex(w));
  }
  std::vector<double> values(keys.size());
  std::vector<bool> have(keys.size(), false);
  if (hooks.cache != nullptr)
    for (std::size_t k = 0; k < keys.size(); ++k)
      if (auto v = hooks.cache->find(keys[k]); v && v->size() == 1) {
        values[k] = v->front();
        have[k] = true;
      }
  std::vector<std::size_t> todo;
  for (std::size_t k = 0; k < keys.size(); ++k)
    if (!have[k]) todo.push_back(k);

  auto pulses_for = [&](std::size_t k) {
    std::vector<LaserPulse> p;
    if (k == 0 || k % 2 == 0) p.push_back(model.pump);
    if (k > 0) p.push_back(probe_pulse(model, omega_p_values[(k - 1) / 2]));
    return p;
  };
  std::vector<double> seconds(keys.size(), 0.0);
  parallel_for(todo.size(), hooks.workers, [&](std::size_t t) {
    const std::size_t k = todo[t];
    const auto start = clock::now();
    const auto pulses = pulses_for(k);
    const auto res = propagate_realization(model.basis.states.front(), Drive{pulses, nullptr, 0.0},
                                           model.context, model.propagation);
    values[k] = absorbed_energy(res.final_state, model.basis, e0);
    if (hooks.cache != nullptr) hooks.cache->store(keys[k], {values[k]});
    seconds[k] = std::chrono::duration<double>(clock::now() - start).count();
  });
  if (hooks.on_cell)
    for (std::size_t k = 0; k < keys.size(); ++k)
      hooks.on_cell({keys[k], values[k], 0.0, seconds[k], have[k]});
  out.pump_only = values[0];
  for (std::size_t i = 0; i < n; ++i) {
    out.bare.push_back(values[1 + 2 * i]);
    out.gain.push_back(values[2 + 2 * i]);
  }
  return out;
}

FilteredComparison run_filtered_compare(const Model& model, std::span<const double> sqrt_d_values,
                                        const SweepHooks& hooks) {
  FilteredComparison out;
  out.holes = model.config.noise.holes;
  const auto laser = run_batch({laser_job(model, model.pump.amplitude)}, hooks).front();
  out.broadband = sweep(model, sqrt_d_values, "broad:", false, laser, hooks);
  out.perforated = sweep(model, sqrt_d_values, "perforated:", true, laser, hooks);
  return out;
}

std::size_t peak_index(std::span<const EnhancementPoint> points) {
  std::size_t best = points.size();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].floored) continue;
    if (best == points.size() || points[i].eta > points[best].eta) best = i;
  }
  if (best == points.size()) {
    best = 0;
    for (std::size_t i = 1; i < points.size(); ++i)
      if (points[i].eta > points[best].eta) best = i;
  }
  return best;
}

Table scurve_table(const RunConfig& cfg, std::span<const ScurvePoint> points) {
  Table t{base_comments(cfg, "scurve"), {"F0[a.u.]", "P_L"}, {}};
  for (const auto& p : points) t.rows.push_back({p.f0, p.p_laser});
  return t;
}

Table enhancement_table(const RunConfig& cfg, const std::string& name,
                        std::span<const EnhancementPoint> points) {
  Table t{base_comments(cfg, name),
          {"sqrt_D[a.u.]", "F0[a.u.]", "P_L", "P_N", "P_N_err", "P_LN", "P_LN_err", "eta", "floored"},
          {}};
  for (const auto& p : points)
    t.rows.push_back({p.sqrt_d, p.f0, p.p_laser, p.p_noise, p.p_noise_err, p.p_both, p.p_both_err, p.eta,
                      p.floored ? 1.0 : 0.0});
  return t;
}

Table landscape_table(const RunConfig& cfg, const Landscape& landscape) {
  auto t = enhancement_table(cfg, "landscape", landscape.points);
  if (!landscape.points.empty()) {
    const auto& p = landscape.points[landscape.peak];
    char buf[160];
    std::snprintf(buf, sizeof buf, "global_max: sqrt_D=%.17g F0=%.17g eta=%.17g", p.sqrt_d, p.f0, p.eta);
    t.comments.push_back(buf);
  }
  return t;
}

Table gain_table(const RunConfig& cfg, const GainProfile& profile) {
  Table t{base_comments(cfg, "frmg"), {"omega_p[a.u.]", "G_pumped[hartree]", "G_bare[hartree]"}, {}};
  char buf[120];
  std::snprintf(buf, sizeof buf, "pump_only_gain: %.17g", profile.pump_only);
  t.comments.push_back(buf);
  for (std::size_t i = 0; i < profile.omega_p.size(); ++i)
    t.rows.push_back({profile.omega_p[i], profile.gain[i], profile.bare[i]});
  return t;
}

Table filtered_table(const RunConfig& cfg, const FilteredComparison& cmp) {
  Table t{base_comments(cfg, "filtered_compare"),
          {"sqrt_D[a.u.]", "P_L", "P_N_broad", "P_LN_broad", "eta_broad", "P_N_perforated",
           "P_LN_perforated", "eta_perforated"},
          {}};
  for (const auto& h : cmp.holes) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "hole: center=%.17g width=%.17g", h.center, h.width);
    t.comments.push_back(buf);
  }
  for (std::size_t i = 0; i < cmp.broadband.size(); ++i) {
    const auto& b = cmp.broadband[i];
    const auto& p = cmp.perforated[i];
    t.rows.push_back({b.sqrt_d, b.p_laser, b.p_noise, b.p_both, b.eta, p.p_noise, p.p_both, p.eta});
  }
  return t;
}

Table eigen_table(const BoundStateBasis& basis) {
  Table t{{kVersionTag, "table: eigen"}, {"n", "E_numeric[hartree]", "E_analytic[hartree]", "abs_diff[hartree]"}, {}};
  char buf[160];
  std::snprintf(buf, sizeof buf, "molecule: mass=%.17g De=%.17g beta=%.17g", basis.params.mass,
                basis.params.well_depth, basis.params.beta);
  t.comments.push_back(buf);
  std::snprintf(buf, sizeof buf, "grid: x_min=%.17g x_max=%.17g n_points=%zu", basis.grid.x_min,
                basis.grid.x_max, basis.grid.n_points);
  t.comments.push_back(buf);
  for (std::size_t n = 0; n < basis.size(); ++n) {
    const double exact = analytic_energy(basis.params, static_cast<int>(n));
    t.rows.push_back({static_cast<double>(n), basis.energies[n], exact, std::abs(basis.energies[n] - exact)});
  }
  return t;
}

}  // namespace stochdiss
