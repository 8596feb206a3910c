#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace dramanet {

/// Seeded generator used by every stochastic code path.
///
/// std::mt19937_64 has a fully specified output sequence, but the standard
/// distributions do not, so uniform and categorical draws are computed here
/// to keep results bit-identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Index drawn with probability weights[i] / sum(weights). Zero-weight
  /// entries are never returned. Throws DegenerateStateError when the total
  /// weight is not positive.
  std::size_t categorical(std::span<const double> weights);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; maps (base seed, stream index) to an independent seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace dramanet
