#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pinndarts {

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);

// Mixes a base seed with a stream label so that independent roles (interior
// sampling, boundary sampling, weight init, ...) draw from unrelated streams.
// Built from FNV-1a and SplitMix64, both fully specified, so streams are
// identical on every platform.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream);

// mt19937_64 with hand-rolled conversions: the std distributions are not
// bit-reproducible across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::string_view stream) : engine_(derive_seed(seed, stream)) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n), unbiased.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace pinndarts
