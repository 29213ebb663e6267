#pragma once

#include <cstdint>
#include <random>

namespace mixpose {

/// One SplitMix64 output for state x. Used as a stateless mixing function.
std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based child seed: a pure function of (master, index), so parallel
/// and serial execution derive identical per-run streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Inverse standard normal CDF, accurate to full double precision.
double norminv(double p);

/// Standard normal CDF.
double normcdf(double x);

/// Deterministic random source. Variates are generated from raw engine bits
/// with explicit formulas, so a given seed produces the same sequence
/// independent of the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  /// Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Standard normal draw (one engine call).
  double normal();

  /// Uniform index in [0, n). n must be > 0.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace mixpose
