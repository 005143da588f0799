#pragma once

#include <cstdint>
#include <random>

namespace testvector {

/// Seeded generator with cheap derivation of independent streams.
///
/// A stream is identified by (seed, stream id); the engine state is obtained
/// by hashing the pair with SplitMix64, so workers can each own a stream and
/// Monte-Carlo runs stay reproducible regardless of how work is scheduled.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Independent child stream; does not advance this generator.
  Rng split(std::uint64_t stream) const;

  double normal();
  double uniform();  // [0, 1)

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace testvector
