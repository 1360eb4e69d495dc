#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kcenter {

// Caller passed something malformed (bad k, bad file, bad flag value).
// The CLI maps this to exit code 2.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A runtime guard tripped (combinatorial explosion, capacity overflow).
// The CLI maps this to exit code 1.
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// C(n,k) with saturation at `cap` so guards never overflow.
inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k,
                                     std::uint64_t cap) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    if (r > cap) return cap + 1;
    r = r * (n - k + i) / i;
  }
  return r > cap ? cap + 1 : r;
}

}  // namespace kcenter
