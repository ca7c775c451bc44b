#pragma once

#include <cmath>
#include <cstdint>

namespace coexlab {

// SplitMix64 (Steele/Lea/Flood splittable generator). Chosen over the
// standard-library engines because the raw 64-bit stream and the real-valued
// transforms below are fully specified here, so simulation results are
// reproducible across platforms and standard libraries.
//
// Stream derivation rule used by the simulator:
//   run_seed     = derive_seed(base_seed, run_index)
//   lte stream   = SplitMix64(derive_seed(run_seed, 0))
//   station j    = SplitMix64(derive_seed(run_seed, j + 1))
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0,1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bernoulli(double p) { return next_unit() < p; }

  // Exponential with the given mean; mean 0 yields 0.
  double next_exponential(double mean) { return -mean * std::log1p(-next_unit()); }

  // Uniform integer on [0, bound) via rejection-free 128-bit scaling.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) return 0;
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

// Deterministic sub-stream seed: one finalizer pass over seed mixed with a
// tag-dependent offset. Distinct tags give statistically independent streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace coexlab
