#pragma once

#include <cstdint>

#include "dary/error.hpp"

namespace dary {

/// Work done by the growth chain. The first three counters are the
/// constant-cost class; lex_letters_compared is the root-path work spent
/// ordering marked edges and is reported separately.
struct OpCounters {
  std::uint64_t node_allocations = 0;
  std::uint64_t link_redirections = 0;
  std::uint64_t rng_draws = 0;
  std::uint64_t lex_letters_compared = 0;

  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

/// splitmix64: state += golden gamma, then the standard finalizer.
class Prng {
 public:
  explicit Prng(std::uint64_t seed = 0) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

/// Uniform integer in [0, k). Raw draws at or above floor(2^64/k)*k are
/// rejected; every raw draw counts toward counters->rng_draws.
inline std::uint64_t uniform_below(Prng& rng, std::uint64_t k, OpCounters* counters = nullptr) {
  if (k == 0) throw Error(Errc::invalid_argument, "uniform_below needs k >= 1");
  const std::uint64_t excess = (0 - k) % k;  // 2^64 mod k
  for (;;) {
    std::uint64_t x = rng.next();
    if (counters) ++counters->rng_draws;
    if (excess == 0 || x < 0 - excess) return x % k;
  }
}

}  // namespace dary
