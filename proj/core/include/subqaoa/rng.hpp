#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace subqaoa {

// Every stochastic choice in the library (random graphs, parameter draws,
// optimizer restarts) flows through this one generator so that runs are
// reproducible across platforms and across reimplementations.  The generator
// is splitmix64: state advances by the golden-ratio increment and the output
// is the standard 3-stage xor-shift/multiply finalizer.

constexpr std::uint64_t kSplitMix64Increment = 0x9E3779B97F4A7C15ULL;

/// splitmix64 output finalizer; also used as a general-purpose 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next_u64() {
    state_ += kSplitMix64Increment;
    return mix64(state_);
  }

  /// Uniform double in [0, 1), 53 bits of entropy.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

 private:
  std::uint64_t state_;
};

/// FNV-1a over bytes; used for checksums and for hashing tags into seeds.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Deterministic sub-stream seed: folds a path of integers into a base seed.
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(base + kSplitMix64Increment);
  for (std::uint64_t p : path) {
    s = mix64(s ^ (p + kSplitMix64Increment));
  }
  return s;
}

}  // namespace subqaoa
