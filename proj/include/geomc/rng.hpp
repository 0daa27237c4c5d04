#ifndef GEOMC_RNG_HPP
#define GEOMC_RNG_HPP

#include <cstdint>
#include <random>

#include "geomc/linalg.hpp"

namespace geomc {

/// Seedable random stream. Single owner; hand each thread or chain its own
/// stream obtained from split().
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent child stream number `index`. Deterministic in (seed, index)
  /// and does not advance this stream.
  Rng split(std::uint64_t index) const;

  std::uint64_t seed() const noexcept { return seed_; }

  double normal();
  double uniform();
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);
  Vector normal_vector(Eigen::Index n);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace geomc

#endif  // GEOMC_RNG_HPP
