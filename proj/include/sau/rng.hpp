#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace sau {

// What a derived stream is for. Keeping this a closed enum makes the
// (trial, purpose) -> seed map exactly injective (see RngStream::derive_seed).
enum class StreamPurpose : std::uint16_t {
  env = 0,      // context generation, reward noise, dataset shuffling
  policy = 1,   // posterior draws, exploration noise
  check = 2,    // Monte-Carlo property checks
  fixture = 3,  // synthetic dataset generation
};

std::uint64_t splitmix64(std::uint64_t x);

// FNV-1a, used to salt per-policy seeds so distinct policy kinds never share
// exploration randomness while environment streams stay common across them.
std::uint64_t fnv1a64(std::string_view s);

// Deterministic random stream. The engine is std::mt19937_64, whose output
// sequence is fully specified by the standard; all distribution transforms
// are implemented here rather than via std::*_distribution (those are
// implementation-defined and would break byte-identical replays across
// toolchains).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  // Stream for (master seed, trial index, purpose). Injective over
  // (trial, purpose) for trial < 2^48: trial<<16 | purpose is injective and
  // splitmix64's finalizer is a bijection on u64.
  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                                   StreamPurpose purpose);
  static RngStream derive(std::uint64_t master, std::uint64_t trial,
                          StreamPurpose purpose) {
    return RngStream(derive_seed(master, trial, purpose));
  }

  std::uint64_t next_u64() { return engine_(); }

  double uniform01();                        // [0, 1), 53-bit resolution
  double uniform(double lo, double hi);      // [lo, hi); requires lo < hi
  double gaussian(double mean, double var);  // exact Box-Muller; var==0 -> mean
  double gamma(double shape);                // unit scale, shape > 0
  double beta(double a, double b);           // two-gamma ratio, value in (0,1)
  double student_t_truncated(double df, double cap);  // clipped to [-cap, cap]
  int uniform_int(int n);                    // unbiased on {0, ..., n-1}

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(static_cast<int>(i)));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace sau
