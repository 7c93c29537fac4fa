#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "dary/bijections.hpp"
#include "dary/prng.hpp"
#include "dary/tree.hpp"

namespace dary {

/// Draws a uniform (d-1)-subset of E(t) u Buds(d). Ranks [0, dn) name the
/// edges through the non-root nodes in arena order, ranks [dn, dn+d-1) the
/// buds b_0..b_{d-2}. Duplicate ranks are redrawn.
inline std::vector<MarkTarget> sample_mark_set(Prng& rng, const DaryTree& t, OpCounters* counters = nullptr) {
  const auto d = static_cast<std::size_t>(t.arity());
  const std::uint64_t edges = t.edge_count();
  const std::uint64_t universe = edges + d - 1;
  std::vector<std::uint64_t> ranks;
  ranks.reserve(d - 1);
  while (ranks.size() < d - 1) {
    const std::uint64_t r = uniform_below(rng, universe, counters);
    if (std::find(ranks.begin(), ranks.end(), r) == ranks.end()) ranks.push_back(r);
  }
  std::vector<MarkTarget> marks;
  marks.reserve(d - 1);
  for (auto r : ranks)
    marks.push_back(r < edges ? MarkTarget::edge(t.nonroot_node_by_rank(r))
                              : MarkTarget::bud(static_cast<int>(r - edges)));
  return marks;
}

/// One run of the growth chain: the current tree, its step count, the
/// generator and the cost counters.
struct GrowthState {
  DaryTree tree;
  std::uint64_t step = 0;
  Prng rng;
  OpCounters counters;
  /// Test hook: when set, every step uses this letter instead of drawing one.
  std::optional<int> forced_letter;
  /// When set, accumulates the wall-clock time spent ordering marked edges.
  std::chrono::nanoseconds* lex_clock = nullptr;

  GrowthState(int arity, std::uint64_t seed) : tree(arity), rng(seed) {}
};

/// Per step: d-1 distinct mark ranks are drawn first, then the letter
/// 1 + uniform_below(d). The enlarged tree replaces the current one and its
/// leaf marks are dropped.
inline void grow_step(GrowthState& s) {
  auto marks = sample_mark_set(s.rng, s.tree, &s.counters);
  const int d = s.tree.arity();
  Letter a{s.forced_letter ? *s.forced_letter : 1 + static_cast<int>(uniform_below(s.rng, static_cast<std::uint64_t>(d), &s.counters))};
  if (s.forced_letter) check_letter(a, d);
  auto out = detail::InPlaceEnlarge::run(EdgeMarkedTree(std::move(s.tree), std::move(marks)), a, &s.counters,
                                         s.lex_clock);
  s.tree = std::move(out.tree);
  ++s.step;
}

struct GrowResult {
  DaryTree tree;
  OpCounters counters;
};

inline void check_growth_size(int arity, std::uint64_t n) {
  const std::uint64_t nodes = static_cast<std::uint64_t>(arity) * n + 1;
  if (n > (NodeId::kNone - 1) / static_cast<std::uint64_t>(arity) || nodes >= NodeId::kNone)
    throw Error(Errc::size_guard, "a tree with " + std::to_string(n) + " internal nodes does not fit the arena");
}

inline GrowResult grow_to(int arity, std::uint64_t n, std::uint64_t seed) {
  check_growth_size(arity, n);
  GrowthState s(arity, seed);
  s.tree.reserve(static_cast<std::size_t>(arity) * n + 1);
  while (s.step < n) grow_step(s);
  return {std::move(s.tree), s.counters};
}

/// Lazy sequence t_0, t_1, ... of one growth run; each call to next()
/// returns a snapshot copy.
class Chain {
 public:
  Chain(int arity, std::uint64_t seed) : state_(arity, seed) {}

  DaryTree next() {
    if (started_) grow_step(state_);
    started_ = true;
    return state_.tree;
  }

  const GrowthState& state() const noexcept { return state_; }

 private:
  GrowthState state_;
  bool started_ = false;
};

}  // namespace dary
