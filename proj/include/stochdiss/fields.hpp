#ifndef STOCHDISS_FIELDS_HPP
#define STOCHDISS_FIELDS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "stochdiss/morse.hpp"

namespace stochdiss {

/// F(t) = sin^2(pi t/Tp) F0 sin(omega t + delta) on [0, Tp], zero elsewhere.
/// The same type describes the pump and the tunable probe.
struct LaserPulse {
  double amplitude = 0.0;  ///< F0, a.u.
  double omega = 0.0;      ///< carrier angular frequency, a.u.
  double phase = 0.0;      ///< carrier-envelope phase delta, rad
  double duration = 0.0;   ///< Tp, a.u. of time

  bool operator==(const LaserPulse&) const = default;
};

/// Pulse lasting `cycles` optical periods of the carrier.
LaserPulse pulse_with_cycles(double amplitude, double omega, double phase, double cycles);

double laser_field(const LaserPulse& pulse, double t);

/// Coherent sum of all pulses at time t.
double total_field(std::span<const LaserPulse> pulses, double t);

struct SpectralHole {
  double center = 0.0;  ///< angular frequency, a.u.
  double width = 0.0;   ///< full width, a.u.

  bool operator==(const SpectralHole&) const = default;
};

enum class NoiseShape {
  white,         ///< i.i.d. normal deviate per step
  band_limited,  ///< spectral synthesis up to `bandwidth`, holes removed
};

/// Gaussian noise with <xi(t) xi(t')> = 2D delta(t - t') (white) or its
/// band-limited, optionally perforated, counterpart.
struct NoiseSpec {
  double intensity = 0.0;  ///< D, a.u.
  std::uint64_t seed = 0;
  NoiseShape shape = NoiseShape::white;
  double bandwidth = 1.0;  ///< cutoff angular frequency, band_limited only
  std::vector<SpectralHole> holes;

  double amplitude() const;  ///< sqrt(D)
  bool operator==(const NoiseSpec&) const = default;
};

/// Throws ConfigError on D < 0, non-positive widths, or holes that leave
/// (0, bandwidth).
void validate(const NoiseSpec& spec);

/// Unit-variance deviates xi_t for one realization; the momentum kick of step
/// t is sqrt(2 D dt) xi_t.
struct NoiseRealization {
  std::vector<double> kicks;
  NoiseSpec spec;
  double dt = 0.0;

  double kick_scale() const;
  double kick(std::size_t step) const { return kick_scale() * kicks[step]; }
  std::size_t size() const { return kicks.size(); }
};

NoiseRealization sample_white_noise(const NoiseSpec& spec, std::size_t n_steps, double dt);

/// Spectral synthesis: complex normal amplitudes on every positive frequency
/// bin below the bandwidth, hole bins zeroed, inverse transformed. The scale
/// gives unit variance per step when no holes are present.
NoiseRealization sample_filtered_noise(const NoiseSpec& spec, std::size_t n_steps, double dt);

/// Dispatches on spec.shape.
NoiseRealization sample_noise(const NoiseSpec& spec, std::size_t n_steps, double dt);

/// Holes of the given width centred on the first `count` single-photon
/// resonances E_{n+1} - E_n of the molecule.
std::vector<SpectralHole> resonance_holes(const MorseParams& params, int count, double width);

/// Two columns, t and xi_t, one row per step.
void write_noise_trace(std::ostream& out, const NoiseRealization& noise);

}  // namespace stochdiss

#endif  // STOCHDISS_FIELDS_HPP
