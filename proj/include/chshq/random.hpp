#pragma once

#include <cstdint>
#include <random>

namespace chshq {

/// Seeded generator with platform-independent derived distributions.
///
/// The standard distribution adaptors are implementation-defined, so every
/// derived draw here is computed directly from the raw 64-bit engine output.
/// Identical seeds give identical streams on every toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). Requires n > 0.
  std::uint64_t below(std::uint64_t n);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  bool bernoulli(double probability) { return uniform() < probability; }

  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Stream for the i-th independent sub-experiment under a user seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace chshq
