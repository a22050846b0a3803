#ifndef STOCHDISS_SPECTRAL_HPP
#define STOCHDISS_SPECTRAL_HPP

#include <cstddef>
#include <span>

#include "stochdiss/grid.hpp"

namespace stochdiss {

/// In-place complex DFT of a fixed length, unnormalised in both directions.
/// Plans are created once per length under a lock and shared read-only;
/// execution is reentrant. Buffers must come from AlignedAllocator.
class FftPlan {
 public:
  static const FftPlan& for_size(std::size_t n);

  std::size_t size() const { return n_; }
  /// X_k = sum_j x_j exp(-2 pi i jk/n)
  void forward(std::span<Complex> data) const;
  /// x_j = sum_k X_k exp(+2 pi i jk/n)
  void backward(std::span<Complex> data) const;

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan();

 private:
  explicit FftPlan(std::size_t n);

  std::size_t n_;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

}  // namespace stochdiss

#endif  // STOCHDISS_SPECTRAL_HPP
