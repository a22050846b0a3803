#ifndef STOCHDISS_ERRORS_HPP
#define STOCHDISS_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace stochdiss {

/// The grid cannot hold the full bound spectrum of the potential.
class GridTooSmallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A propagated wavefunction acquired non-finite amplitudes.
class NumericalBlowupError : public std::runtime_error {
 public:
  explicit NumericalBlowupError(const std::string& what, std::uint64_t seed = 0,
                                std::int64_t cell = -1, std::int64_t realization = -1)
      : std::runtime_error(what), seed_(seed), cell_(cell), realization_(realization) {}

  std::uint64_t seed() const { return seed_; }
  std::int64_t cell() const { return cell_; }
  std::int64_t realization() const { return realization_; }

 private:
  std::uint64_t seed_;
  std::int64_t cell_;
  std::int64_t realization_;
};

/// A configuration value violates the invariants of the type that owns it.
/// field() names the offending key path, e.g. "molecule.De".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace stochdiss

#endif  // STOCHDISS_ERRORS_HPP
