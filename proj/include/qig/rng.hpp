#pragma once

#include <cstdint>

namespace qig {

/// Counter-based pseudo-random stream built on the splitmix64 mixer.
///
/// Every stream is identified by a 64-bit key; substreams are derived by
/// mixing a stream id into the key. Shot n of an estimation run draws from
/// substream n, so concurrent shot batches reproduce the sequential stream
/// bit for bit and a fixed seed yields byte-identical output everywhere.
class ShotRng {
 public:
  explicit ShotRng(std::uint64_t seed) : key_(mix(seed)) {}

  /// Derive an independent stream keyed by `id`. Derivation uses only the
  /// stream key, never the draw counter, so the result does not depend on
  /// how many values were already drawn from this stream.
  ShotRng substream(std::uint64_t id) const {
    return ShotRng(mix(key_ ^ (0x9E3779B97F4A7C15ull * (id + 1))), Raw{});
  }

  std::uint64_t next_u64() {
    counter_ += 0x9E3779B97F4A7C15ull;
    return mix(key_ + counter_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; safe as an argument to log().
  double uniform_positive() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  struct Raw {};
  ShotRng(std::uint64_t key, Raw) : key_(key) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qig
