#include "stochdiss/fields.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "stochdiss/errors.hpp"
#include "stochdiss/rng.hpp"
#include "stochdiss/spectral.hpp"

namespace stochdiss {

LaserPulse pulse_with_cycles(double amplitude, double omega, double phase, double cycles) {
  return {amplitude, omega, phase, 2.0 * std::numbers::pi * cycles / omega};
}

double laser_field(const LaserPulse& pulse, double t) {
  if (t <= 0.0 || t >= pulse.duration) return 0.0;
  const double s = std::sin(std::numbers::pi * t / pulse.duration);
  return s * s * pulse.amplitude * std::sin(pulse.omega * t + pulse.phase);
}

double total_field(std::span<const LaserPulse> pulses, double t) {
  double f = 0.0;
  for (const auto& p : pulses) f += laser_field(p, t);
  return f;
}

double NoiseSpec::amplitude() const { return std::sqrt(intensity); }

void validate(const NoiseSpec& spec) {
  if (!(spec.intensity >= 0.0) || !std::isfinite(spec.intensity))
    throw ConfigError("noise.D", "noise intensity must be finite and >= 0");
  if (spec.shape == NoiseShape::white) return;
  if (!(spec.bandwidth > 0.0)) throw ConfigError("noise.bandwidth", "must be positive");
  for (std::size_t i = 0; i < spec.holes.size(); ++i) {
    const auto& h = spec.holes[i];
    const std::string key = "noise.holes[" + std::to_string(i) + "]";
    if (!(h.width > 0.0)) throw ConfigError(key + ".width", "hole width must be positive");
    if (h.center - h.width / 2 <= 0.0 || h.center + h.width / 2 >= spec.bandwidth)
      throw ConfigError(key, "hole band must lie inside (0, bandwidth)");
  }
}

double NoiseRealization::kick_scale() const { return std::sqrt(2.0 * spec.intensity * dt); }

NoiseRealization sample_white_noise(const NoiseSpec& spec, std::size_t n_steps, double dt) {
  validate(spec);
  NoiseRealization out{std::vector<double>(n_steps), spec, dt};
  auto engine = make_engine(spec.seed);
  std::normal_distribution<double> normal;
  for (auto& x : out.kicks) x = normal(engine);
  return out;
}

NoiseRealization sample_filtered_noise(const NoiseSpec& spec, std::size_t n_steps, double dt) {
  validate(spec);
  if (n_steps == 0 || !(dt > 0.0)) throw std::invalid_argument("filtered noise: empty trace");

  // Periodic synthesis length; the trace is the first n_steps samples.
  std::size_t len = 2;
  while (len < n_steps) len *= 2;

  const double d_omega = 2.0 * std::numbers::pi / (static_cast<double>(len) * dt);
  auto in_hole = [&](double w) {
    for (const auto& h : spec.holes)
      if (std::abs(w - h.center) <= h.width / 2) return true;
    return false;
  };

  ComplexVector spectrum(len);
  auto engine = make_engine(spec.seed);
  std::normal_distribution<double> normal;
  std::size_t band_bins = 0;
  // Every bin draws its amplitude, kept or not, so that a trace with holes
  // shares all surviving modes with the unperforated trace of the same seed.
  for (std::size_t k = 1; k < len / 2; ++k) {
    const double w = static_cast<double>(k) * d_omega;
    if (w >= spec.bandwidth) break;
    const double re = normal(engine);
    const double im = normal(engine);
    ++band_bins;
    if (!in_hole(w)) spectrum[k] = Complex(re, im) / std::numbers::sqrt2;
  }
  if (band_bins == 0) throw std::invalid_argument("filtered noise: bandwidth below frequency resolution");

  FftPlan::for_size(len).backward(spectrum);
  const double scale = std::sqrt(2.0 / static_cast<double>(band_bins));
  NoiseRealization out{std::vector<double>(n_steps), spec, dt};
  for (std::size_t i = 0; i < n_steps; ++i) out.kicks[i] = scale * spectrum[i].real();
  return out;
}

NoiseRealization sample_noise(const NoiseSpec& spec, std::size_t n_steps, double dt) {
  return spec.shape == NoiseShape::white ? sample_white_noise(spec, n_steps, dt)
                                         : sample_filtered_noise(spec, n_steps, dt);
}

std::vector<SpectralHole> resonance_holes(const MorseParams& params, int count, double width) {
  std::vector<SpectralHole> holes;
  for (int n = 0; n < count && n + 1 < params.bound_count(); ++n)
    holes.push_back({analytic_energy(params, n + 1) - analytic_energy(params, n), width});
  return holes;
}

void write_noise_trace(std::ostream& out, const NoiseRealization& noise) {
  out << "# t[a.u.]\txi\n" << std::setprecision(17);
  for (std::size_t i = 0; i < noise.kicks.size(); ++i)
    out << static_cast<double>(i) * noise.dt << '\t' << noise.kicks[i] << '\n';
}

}  // namespace stochdiss
