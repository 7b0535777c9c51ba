#pragma once

#include <cstdint>

namespace storyshare {

// Counter-based generator (SplitMix64): the state walks a fixed odd gamma and
// the output is a bijective hash of the counter, so the i-th draw is a pure
// function of (stream seed, i) and streams can be skipped in O(1).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  // Independent, reproducible stream for run `run_index` under `master_seed`.
  // Scheduling-independent: parallel runs each own their stream.
  static SplitMix64 stream(std::uint64_t master_seed, std::uint64_t run_index) {
    return SplitMix64(mix(mix(master_seed) ^ mix(run_index ^ 0x9e3779b97f4a7c15ULL)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix_out(state_);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  void discard(std::uint64_t n) { state_ += n * 0x9e3779b97f4a7c15ULL; }

 private:
  static std::uint64_t mix_out(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t mix(std::uint64_t z) {
    return mix_out(z + 0x9e3779b97f4a7c15ULL);
  }

  std::uint64_t state_;
};

}  // namespace storyshare
