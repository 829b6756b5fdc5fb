#pragma once

#include <cstdint>
#include <vector>

namespace redox {

// splitmix64: tiny, fully specified generator so layouts, traces and
// tie-breaks are bit-identical across platforms and reruns.
class SplitMix64 {
public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). Lemire multiply-shift; bias is below 2^-64.
  uint64_t next_below(uint64_t n) {
    return static_cast<uint64_t>((static_cast<__uint128_t>(next()) * n) >> 64);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  uint64_t state_;
};

// Stable sub-stream derivation: mix the master seed with a tag.
inline uint64_t derive_seed(uint64_t seed, uint64_t tag) {
  SplitMix64 rng(seed ^ (0xA5A5A5A5A5A5A5A5ULL + tag * 0x9E3779B97F4A7C15ULL));
  return rng.next();
}

template <typename T>
void shuffle(std::vector<T>& v, SplitMix64& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng.next_below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace redox
