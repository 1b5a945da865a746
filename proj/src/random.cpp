#include "duality/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace duality {

namespace {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ (0x9E3779B97F4A7C15ull * (index + 1)));
}

RandomStream::RandomStream(std::uint64_t seed) : engine_(seed) {}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(derive_stream_seed(seed, stream)) {}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open() {
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

bool RandomStream::bernoulli(double probability) {
  if (!(probability >= 0.0) || !(probability <= 1.0))
    throw std::invalid_argument("RandomStream::bernoulli: probability outside [0, 1]");
  return uniform() < probability;
}

}  // namespace duality
