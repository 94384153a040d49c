#pragma once

#include <cstdint>
#include <random>

namespace uccap {

/// Seeded generator for all Monte Carlo work. Sampling goes through the
/// inverse CDF so every variate consumes exactly one uniform draw; streams
/// stay aligned and runs are bit-reproducible for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform01() {
    const std::uint64_t bits = gen_() >> 11;  // 53 random bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Uniform integer in [0, n).
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
  }

  double normal(double mu, double sigma);
  double lognormal(double mu_log, double sigma_log);
  double weibull(double shape, double scale);
  double logistic(double location, double scale);

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

/// Seed for an independent work unit derived from a base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return base ^ index;
}

}  // namespace uccap
