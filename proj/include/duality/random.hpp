#pragma once

#include <cstdint>
#include <random>

namespace duality {

/// Engine seed for sub-stream `index` of run seed `seed`: the splitmix64
/// finalizer applied to seed XOR index * odd golden-ratio constant. Distinct
/// (seed, index) pairs land on statistically unrelated engine states, which
/// makes multi-stream runs reproducible regardless of scheduling.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index);

/// Deterministic random stream: one mt19937_64 engine plus explicit bit-level
/// conversions, so a (seed, stream) pair yields the same draw sequence on any
/// platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform();
  /// Uniform double in (0, 1]; safe as a log argument.
  double uniform_open();
  /// Standard normal draw (Box-Muller, spare value cached).
  double normal();
  bool bernoulli(double probability);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace duality
