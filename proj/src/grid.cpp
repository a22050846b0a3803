#include "stochdiss/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "stochdiss/spectral.hpp"

namespace stochdiss {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double GridSpec::dp() const {
  return 2.0 * std::numbers::pi / (static_cast<double>(n_points) * dx());
}

double GridSpec::p(std::size_t k) const {
  const auto n = static_cast<std::ptrdiff_t>(n_points);
  auto kk = static_cast<std::ptrdiff_t>(k);
  if (kk >= n / 2) kk -= n;
  return static_cast<double>(kk) * dp();
}

double GridSpec::p_max() const { return std::numbers::pi / dx(); }

std::vector<double> GridSpec::positions() const {
  std::vector<double> xs(n_points);
  for (std::size_t i = 0; i < n_points; ++i) xs[i] = x(i);
  return xs;
}

std::vector<double> GridSpec::momenta() const {
  std::vector<double> ps(n_points);
  for (std::size_t k = 0; k < n_points; ++k) ps[k] = p(k);
  return ps;
}

GridSpec make_grid(double x_min, double x_max, std::size_t n_points) {
  if (!(std::isfinite(x_min) && std::isfinite(x_max)) || !(x_max > x_min))
    throw std::invalid_argument("grid: x_max must exceed x_min");
  if (n_points < 8 || !is_power_of_two(n_points))
    throw std::invalid_argument("grid: n_points must be a power of two >= 8, got " +
                                std::to_string(n_points));
  return GridSpec{x_min, x_max, n_points};
}

Wavefunction::Wavefunction(GridSpec grid) : grid_(grid), amps_(grid.n_points) {}

Wavefunction::Wavefunction(GridSpec grid, ComplexVector amplitudes)
    : grid_(grid), amps_(std::move(amplitudes)) {
  if (amps_.size() != grid_.n_points)
    throw std::invalid_argument("wavefunction: amplitude count does not match grid");
}

Wavefunction& Wavefunction::operator*=(Complex s) {
  for (auto& a : amps_) a *= s;
  return *this;
}

Complex inner_product(const Wavefunction& a, const Wavefunction& b) {
  if (!(a.grid() == b.grid()))
    throw std::invalid_argument("inner_product: wavefunctions live on different grids");
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    // conj(x) * y
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  const double dx = a.grid().dx();
  return {re * dx, im * dx};
}

namespace {
double sum_norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += z.real() * z.real() + z.imag() * z.imag();
  return s;
}
}  // namespace

double norm_squared(const Wavefunction& psi) {
  return sum_norm(psi.amplitudes()) * psi.grid().dx();
}

double norm_squared(const MomentumAmplitudes& phi) {
  return sum_norm(phi.amplitudes) * phi.grid.dx();
}

MomentumAmplitudes to_momentum(const Wavefunction& psi) {
  const auto n = psi.grid().n_points;
  ComplexVector out(psi.amplitudes().begin(), psi.amplitudes().end());
  FftPlan::for_size(n).forward(out);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& z : out) z *= s;
  return {psi.grid(), std::move(out)};
}

Wavefunction to_position(const MomentumAmplitudes& phi) {
  const auto n = phi.grid.n_points;
  if (phi.amplitudes.size() != n)
    throw std::invalid_argument("to_position: amplitude count does not match grid");
  ComplexVector out(phi.amplitudes);
  FftPlan::for_size(n).backward(out);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& z : out) z *= s;
  return Wavefunction(phi.grid, std::move(out));
}

double mean_position(const Wavefunction& psi) {
  const auto& g = psi.grid();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double w = std::norm(psi[i]);
    num += g.x(i) * w;
    den += w;
  }
  return den > 0.0 ? num / den : 0.0;
}

double mean_momentum(const Wavefunction& psi) {
  const auto phi = to_momentum(psi);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < phi.amplitudes.size(); ++k) {
    const double w = std::norm(phi.amplitudes[k]);
    num += phi.grid.p(k) * w;
    den += w;
  }
  return den > 0.0 ? num / den : 0.0;
}

// ---------------------------------------------------------------------------

namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
  // FFTW_ESTIMATE picks the plan without timing, so the same length always
  // gets the same algorithm and bit-identical results across runs.
  ComplexVector scratch(n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const int len = static_cast<int>(n);
  forward_plan_ = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!forward_plan_ || !backward_plan_) throw std::runtime_error("fft: planning failed");
}

FftPlan::~FftPlan() {
  std::lock_guard lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

const FftPlan& FftPlan::for_size(std::size_t n) {
  // The mutex is constructed before the cache so it outlives the plans.
  auto& mutex = plan_mutex();
  static std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, std::unique_ptr<FftPlan>(new FftPlan(n))).first;
  return *it->second;
}

void FftPlan::forward(std::span<Complex> data) const {
  if (data.size() != n_) throw std::invalid_argument("fft: length mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), p, p);
}

void FftPlan::backward(std::span<Complex> data) const {
  if (data.size() != n_) throw std::invalid_argument("fft: length mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), p, p);
}

}  // namespace stochdiss
