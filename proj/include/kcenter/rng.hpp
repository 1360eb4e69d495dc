#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace kcenter {

// All randomness in the toolkit flows from one user seed. Substreams are
// derived by hashing a purpose tag ("order", "partition", "generator", ...)
// into the seed, so consumers never share or race on generator state.
//
// mt19937_64 has a standard-mandated sequence and every transform below is
// hand-rolled, so identical seeds give identical results on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  static std::uint64_t substream_seed(std::uint64_t seed,
                                      std::string_view purpose) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a offset basis
    for (char c : purpose) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    // splitmix64 finisher to decorrelate nearby seeds
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull + h;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static Rng stream(std::uint64_t seed, std::string_view purpose) {
    return Rng(substream_seed(seed, purpose));
  }

  std::uint64_t next_u64() { return eng_(); }

  // uniform in [0,1) with 53 random bits
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller; draws a fresh pair each call, second value discarded.
  double normal(double mean, double stddev) {
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    double mag = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * mag * std::cos(2.0 * M_PI * u2);
  }

  // uniform integer in [0, n); modulo bias is < n / 2^64, irrelevant here
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace kcenter
