#pragma once

#include <cmath>
#include <cstdint>

namespace anscombe {

/// Counter-style random stream. Every draw is a pure function of
/// (master_seed, stream_index, draw counter), so handing one stream per
/// Monte Carlo replicate gives results that do not depend on scheduling.
///
/// The generator is a SplitMix64 walk whose origin is avalanche-mixed from
/// the (seed, stream) pair; distinct streams start from scattered origins
/// and behave as statistically independent sequences at desk scale.
class RngStream {
 public:
  RngStream(uint64_t master_seed, uint64_t stream_index) noexcept
      : state_(derive_origin(master_seed, stream_index)) {}

  uint64_t next_u64() noexcept {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0,1) with 53-bit resolution.
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on {0, ..., n-1}, n >= 1. Consumes one draw.
  int64_t next_below(int64_t n) noexcept {
    int64_t k = static_cast<int64_t>(next_unit() * static_cast<double>(n));
    return k >= n ? n - 1 : k;
  }

  /// Standard normal via Box-Muller. Consumes exactly two draws.
  double next_gaussian() noexcept {
    const double u1 = 1.0 - next_unit();  // (0,1], keeps log finite
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  /// Stateless 64-bit avalanche (SplitMix64 finalizer).
  static uint64_t mix(uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Derive a sub-master seed for a named quantity so that separate
  /// estimators inside one run consume independent streams.
  static uint64_t derive_seed(uint64_t master, uint64_t tag) noexcept {
    return mix(master ^ mix(tag + 0x9E3779B97F4A7C15ull));
  }

 private:
  static uint64_t derive_origin(uint64_t master, uint64_t stream) noexcept {
    uint64_t h = mix(master + 0x6A09E667F3BCC909ull);
    h ^= mix(stream + 0xBB67AE8584CAA73Bull);
    return mix(h);
  }

  uint64_t state_;
};

}  // namespace anscombe
