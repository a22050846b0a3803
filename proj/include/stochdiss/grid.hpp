#ifndef STOCHDISS_GRID_HPP
#define STOCHDISS_GRID_HPP

#include <complex>
#include <cstddef>
#include <new>
#include <span>
#include <vector>

namespace stochdiss {

using Complex = std::complex<double>;

/// Allocator returning 64-byte aligned storage so every amplitude buffer can
/// be handed to the shared FFT plans.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t alignment{64};

  AlignedAllocator() noexcept = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), alignment));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, alignment); }

  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

using ComplexVector = std::vector<Complex, AlignedAllocator<Complex>>;

/// Uniform periodic position grid x_i = x_min + i*dx, i in [0, n_points).
/// The conjugate momentum lattice is stored in FFT order:
/// p_k = 2*pi*k/(n*dx) for k < n/2, and k - n otherwise.
struct GridSpec {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t n_points = 0;

  double dx() const { return (x_max - x_min) / static_cast<double>(n_points); }
  double length() const { return x_max - x_min; }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
  double dp() const;
  double p(std::size_t k) const;
  /// Nyquist momentum pi/dx; the lattice covers [-p_max, p_max).
  double p_max() const;

  std::vector<double> positions() const;
  std::vector<double> momenta() const;

  bool operator==(const GridSpec&) const = default;
};

/// Validates and builds a grid. Throws std::invalid_argument when
/// x_max <= x_min or n_points is not a power of two >= 8.
GridSpec make_grid(double x_min, double x_max, std::size_t n_points);

/// Position-space amplitudes with psi normalised as sum |psi_i|^2 dx = 1.
class Wavefunction {
 public:
  Wavefunction() = default;
  explicit Wavefunction(GridSpec grid);
  Wavefunction(GridSpec grid, ComplexVector amplitudes);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return amps_.size(); }

  std::span<Complex> amplitudes() { return amps_; }
  std::span<const Complex> amplitudes() const { return amps_; }
  Complex& operator[](std::size_t i) { return amps_[i]; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  Wavefunction& operator*=(Complex s);

 private:
  GridSpec grid_{};
  ComplexVector amps_;
};

/// Unitary DFT coefficients of a wavefunction, indexed like GridSpec::p(k).
/// They carry the same dx weight as position amplitudes, so norms agree
/// between representations.
struct MomentumAmplitudes {
  GridSpec grid;
  ComplexVector amplitudes;
};

/// sum conj(a_i) b_i dx. Throws std::invalid_argument on grid mismatch.
Complex inner_product(const Wavefunction& a, const Wavefunction& b);

double norm_squared(const Wavefunction& psi);
double norm_squared(const MomentumAmplitudes& phi);

MomentumAmplitudes to_momentum(const Wavefunction& psi);
Wavefunction to_position(const MomentumAmplitudes& phi);

/// <x> and <p> expectation values, normalised by the current norm.
double mean_position(const Wavefunction& psi);
double mean_momentum(const Wavefunction& psi);

bool is_power_of_two(std::size_t n);

}  // namespace stochdiss

#endif  // STOCHDISS_GRID_HPP
