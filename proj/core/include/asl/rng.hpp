#pragma once

#include <cstdint>
#include <random>

namespace asl {

// Seed derivation used everywhere streams are split (episodes, steps,
// modalities). Splitmix64 finalizer over base + stream; bit-exact on any
// conforming platform:
//   z = base + 0x9E3779B97F4A7C15 * (stream + 1)
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (stream + 1ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return mix_seed(mix_seed(base, a), b);
}

// Deterministic random source. The engine (mt19937_64) is fully specified by
// the standard; the distributions below are hand-rolled because the standard
// library's are implementation-defined and would break cross-platform
// reproducibility of recorded runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Unbiased via rejection.
  int uniform_int(int n);

  // Box-Muller; consumes exactly two uniform draws per call.
  double normal(double mean, double sigma);

 private:
  std::mt19937_64 engine_;
};

}  // namespace asl
