#pragma once

#include <algorithm>
#include <cassert>
#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dary/error.hpp"
#include "dary/io.hpp"
#include "dary/marks.hpp"
#include "dary/prng.hpp"
#include "dary/tree.hpp"
#include "dary/walks.hpp"

namespace dary {

/// A letter of the alphabet [1, d].
struct Letter {
  int value = 1;
  friend bool operator==(Letter, Letter) = default;
};

inline void check_letter(Letter a, int arity) {
  if (a.value < 1 || a.value > arity)
    throw Error(Errc::letter_out_of_range,
                "letter " + std::to_string(a.value) + " outside [1," + std::to_string(arity) + "]");
}

struct ForestAndLetter {
  MarkedForest forest;
  Letter letter;
};

struct EdgeMarkedAndLetter {
  EdgeMarkedTree marked;
  Letter letter;
};

namespace detail {

/// Marked edges split into sorted bud indices and edge children.
struct SplitMarks {
  std::vector<int> buds;
  std::vector<NodeId> edges;
};

inline SplitMarks split_marks(const EdgeMarkedTree& x) {
  SplitMarks s;
  for (const auto& m : x.marks) {
    if (m.is_bud())
      s.buds.push_back(m.bud_index());
    else
      s.edges.push_back(m.edge_child());
  }
  std::sort(s.buds.begin(), s.buds.end());
  return s;
}

/// Orders edge children by decreasing lexicographic word. Returns the number
/// of root-path letters materialized to do so.
inline std::uint64_t sort_edges_descending(const DaryTree& t, std::vector<NodeId>& edges) {
  if (edges.size() < 2) return 0;
  std::vector<std::pair<NodeWord, NodeId>> keyed;
  keyed.reserve(edges.size());
  std::uint64_t letters = 0;
  for (auto u : edges) {
    keyed.emplace_back(t.node_word(u), u);
    letters += keyed.back().first.size();
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i] = keyed[i].second;
  return letters;
}

inline std::vector<int> remaining_indices(int arity, const std::vector<int>& buds) {
  std::vector<int> rem;
  for (int i = 0; i < arity; ++i)
    if (!std::binary_search(buds.begin(), buds.end(), i)) rem.push_back(i);
  return rem;
}

inline json forest_frame(const MarkedForest& f) {
  json j{{"forest", to_json(f)}};
  if (f.total_marks() + 1 == static_cast<std::size_t>(f.arity())) j["leaf_sequence"] = to_json(leaf_sequence(f));
  return j;
}

}  // namespace detail

/// Splits an edge-marked tree into an excursion-type forest. Marked bud b_j
/// becomes a root-marked singleton at position j. The other positions are
/// filled from the largest down: each round cuts the lexicographically
/// largest remaining marked edge (u, p(u)), emits the subtree at u with the
/// marked leaves it holds, and leaves u behind as a marked leaf. What is left
/// of the tree takes the smallest remaining position. The letter is carried.
inline ForestAndLetter cut(const EdgeMarkedTree& input, Letter a, json* trace = nullptr) {
  require_valid(input);
  const int d = input.tree.arity();
  check_letter(a, d);

  auto [buds, edges] = detail::split_marks(input);
  std::vector<std::optional<LeafMarkedTree>> slots(static_cast<std::size_t>(d));
  for (int b : buds) slots[static_cast<std::size_t>(b)] = marked_singleton(d);

  DaryTree working = input.tree;  // arena copy: node ids carry over
  std::vector<NodeId> leaf_marks;
  auto rem = detail::remaining_indices(d, buds);
  detail::sort_edges_descending(working, edges);

  json steps = json::array();
  std::vector<NodeId> map;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const NodeId u = edges[k];
    const int target = rem.back();
    rem.pop_back();
#ifndef NDEBUG
    {
      const auto uw = working.node_word(u);
      for (std::size_t j = k + 1; j < edges.size(); ++j) {
        const auto w = working.node_word(edges[j]);
        assert(!(w.size() > uw.size() && std::equal(uw.letters.begin(), uw.letters.end(), w.letters.begin())));
      }
    }
#endif
    DaryTree fragment = working.detach_subtree(u, &map);
    std::vector<NodeId> inside, outside;
    for (auto m : leaf_marks) {
      if (m.index < map.size() && map[m.index].valid() && m != u)
        inside.push_back(map[m.index]);
      else
        outside.push_back(m);
    }
    outside.push_back(u);
    leaf_marks = std::move(outside);
    LeafMarkedTree piece(std::move(fragment), std::move(inside));
    canonicalize(piece);
    if (trace) {
      steps.push_back(json{{"position", target},
                           {"edge", to_string(input.tree.node_word(u), d)},
                           {"fragment", to_json(piece)},
                           {"working", to_json(LeafMarkedTree(working, leaf_marks))},
                           {"remaining", rem}});
    }
    slots[static_cast<std::size_t>(target)] = std::move(piece);
  }
  if (rem.size() != 1) throw Error(Errc::corrupt_input, "remaining index set did not shrink to one element");
  LeafMarkedTree rest(std::move(working), std::move(leaf_marks));
  canonicalize(rest);
  slots[static_cast<std::size_t>(rem.front())] = std::move(rest);

  MarkedForest forest;
  for (auto& s : slots) forest.trees.push_back(std::move(*s));
  if (trace) {
    json frame = detail::forest_frame(forest);
    frame["map"] = "cut";
    frame["letter"] = a.value;
    frame["steps"] = std::move(steps);
    frame["input"] = to_json(input);
    trace->push_back(std::move(frame));
  }
  return {std::move(forest), a};
}

/// Inverse of cut on excursion-type forests. Root-marked singletons become
/// marked buds; the other trees, by increasing position, are plugged one by
/// one at the lexicographically first marked leaf of the tree built so far,
/// whose parent edge becomes marked.
inline EdgeMarkedAndLetter cut_inv(const MarkedForest& f, Letter a) {
  require_valid(f);
  const int d = f.arity();
  check_letter(a, d);
  if (!is_excursion_forest(f))
    throw Error(Errc::not_excursion, "leaf sequence " + to_string(leaf_sequence(f)) + " is not an excursion");

  std::vector<MarkTarget> marks;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < f.trees.size(); ++i) {
    if (is_marked_singleton(f.trees[i]))
      marks.push_back(MarkTarget::bud(static_cast<int>(i)));
    else
      rest.push_back(i);
  }
  if (rest.empty()) throw Error(Errc::corrupt_input, "no tree left to rebuild from");

  DaryTree tree = f.trees[rest.front()].tree;
  std::vector<NodeId> leaf_marks = f.trees[rest.front()].marked_leaves;
  for (std::size_t k = 1; k < rest.size(); ++k) {
    if (leaf_marks.empty()) throw Error(Errc::corrupt_input, "no marked leaf left to plug a tree into");
    auto first = std::min_element(leaf_marks.begin(), leaf_marks.end(), [&](NodeId x, NodeId y) {
      return tree.node_word(x) < tree.node_word(y);
    });
    const NodeId u = *first;
    leaf_marks.erase(first);
    const auto& piece = f.trees[rest[k]];
    auto map = tree.graft(u, piece.tree);
    for (auto m : piece.marked_leaves) leaf_marks.push_back(map[m.index]);
    marks.push_back(MarkTarget::edge(u));
  }
  if (!leaf_marks.empty()) throw Error(Errc::corrupt_input, "marked leaves left over after reassembly");

  EdgeMarkedTree out(std::move(tree), std::move(marks));
  canonicalize(out);
  return {std::move(out), a};
}

/// Position i of the result is position (i + a) mod d of the input.
inline MarkedForest rotate(const MarkedForest& f, Letter a, json* trace = nullptr) {
  const int d = f.arity();
  if (f.trees.size() != static_cast<std::size_t>(d))
    throw Error(Errc::malformed_marks, "a forest must hold exactly d trees");
  check_letter(a, d);
  MarkedForest out;
  for (int i = 0; i < d; ++i) out.trees.push_back(f.trees[static_cast<std::size_t>((i + a.value) % d)]);
  if (trace) {
    json frame = detail::forest_frame(out);
    frame["map"] = "rotate";
    frame["letter"] = a.value;
    trace->push_back(std::move(frame));
  }
  return out;
}

/// Finds the unique shift r that makes the forest excursion-type and returns
/// the shifted forest together with the letter a = d - r (d when r = 0), so
/// that rotate_inv(rotate(f, a)) == (f, a).
inline ForestAndLetter rotate_inv(const MarkedForest& f) {
  const int d = f.arity();
  if (f.trees.size() != static_cast<std::size_t>(d))
    throw Error(Errc::malformed_marks, "a forest must hold exactly d trees");
  const auto r = static_cast<int>(excursion_shift(leaf_sequence(f)));
  MarkedForest out;
  for (int i = 0; i < d; ++i) out.trees.push_back(f.trees[static_cast<std::size_t>((i + r) % d)]);
  return {std::move(out), Letter{r > 0 ? d - r : d}};
}

/// New root whose child i+1 is the forest's tree at position i.
inline LeafMarkedTree add_root(const MarkedForest& f, json* trace = nullptr) {
  require_valid(f);
  const int d = f.arity();
  DaryTree t(d);
  t.expand_leaf(t.root());
  std::vector<NodeId> marks;
  for (int i = 0; i < d; ++i) {
    const auto& piece = f.trees[static_cast<std::size_t>(i)];
    auto map = t.graft(t.child(t.root(), i + 1), piece.tree);
    for (auto m : piece.marked_leaves) marks.push_back(map[m.index]);
  }
  LeafMarkedTree out(std::move(t), std::move(marks));
  canonicalize(out);
  if (trace) trace->push_back(json{{"map", "add_root"}, {"tree", to_json(out)}});
  return out;
}

/// The d root subtrees in slot order, marks kept with their subtree.
inline MarkedForest add_root_inv(const LeafMarkedTree& t) {
  require_valid(t);
  const int d = t.arity();
  if (t.tree.internal_count() == 0) throw Error(Errc::cannot_remove_root, "a root-only tree has no subtrees");
  if (t.mark_count() != static_cast<std::size_t>(d - 1))
    throw Error(Errc::mark_count, "expected " + std::to_string(d - 1) + " marked leaves, found " +
                                      std::to_string(t.mark_count()));
  MarkedForest f;
  std::vector<NodeId> map;
  for (int k = 1; k <= d; ++k) {
    DaryTree sub = t.tree.subtree_copy(t.tree.child(t.tree.root(), k), &map);
    std::vector<NodeId> marks;
    for (auto m : t.marked_leaves)
      if (map[m.index].valid()) marks.push_back(map[m.index]);
    LeafMarkedTree piece(std::move(sub), std::move(marks));
    canonicalize(piece);
    f.trees.push_back(std::move(piece));
  }
  return f;
}

/// add_root(rotate(cut(x, a))), built map by map. With a trace, appends one
/// frame per map.
inline LeafMarkedTree enlarge_composed(const EdgeMarkedTree& x, Letter a, json* trace = nullptr) {
  auto [forest, letter] = cut(x, a, trace);
  return add_root(rotate(forest, letter, trace), trace);
}

namespace detail {

/// The same map as enlarge_composed, performed on the input's arena with
/// O(d) link rewrites: every cut point gets a fresh leaf, every marked bud a
/// fresh singleton, and one fresh root collects the rotated fragments.
/// Exactly d nodes are allocated. Marked leaves are returned in creation
/// order.
struct InPlaceEnlarge {
  static LeafMarkedTree run(EdgeMarkedTree&& x, Letter a, OpCounters* counters,
                            std::chrono::nanoseconds* lex_clock = nullptr) {
    DaryTree& t = x.tree;
    const int d = t.arity();
    auto [buds, edges] = split_marks(x);
    std::uint64_t letters = 0;
    if (lex_clock) {
      const auto start = std::chrono::steady_clock::now();
      letters = sort_edges_descending(t, edges);
      *lex_clock += std::chrono::steady_clock::now() - start;
    } else {
      letters = sort_edges_descending(t, edges);
    }

    auto rem = remaining_indices(d, buds);
    std::vector<NodeId> fragment(static_cast<std::size_t>(d));
    std::vector<NodeId> marked;
    marked.reserve(static_cast<std::size_t>(d - 1));
    std::uint64_t links = 0;

    for (NodeId u : edges) {
      const int target = rem.back();
      rem.pop_back();
      const NodeId p{t.parent_[u.index]};
      const int s = t.slot_[u.index];
      const NodeId stub = t.allocate();
      t.link(p, s, stub);
      links += 2;
      fragment[static_cast<std::size_t>(target)] = u;
      marked.push_back(stub);
    }
    fragment[static_cast<std::size_t>(rem.front())] = t.root_;
    for (int b : buds) {
      const NodeId leaf = t.allocate();
      fragment[static_cast<std::size_t>(b)] = leaf;
      marked.push_back(leaf);
    }
    const NodeId root = t.allocate();
    for (int i = 0; i < d; ++i) t.link(root, i + 1, fragment[static_cast<std::size_t>((i + a.value) % d)]);
    links += 2 * static_cast<std::uint64_t>(d);
    t.root_ = root;
    ++t.internal_;

    if (counters) {
      counters->node_allocations += static_cast<std::uint64_t>(d);
      counters->link_redirections += links;
      counters->lex_letters_compared += letters;
    }
    return LeafMarkedTree(std::move(t), std::move(marked));
  }
};

}  // namespace detail

/// The growth bijection from (edge-marked tree of size n, letter) to
/// (d-1)-leaf-marked trees of size n+1, computed in place on the input's
/// arena.
inline LeafMarkedTree enlarge(EdgeMarkedTree x, Letter a, OpCounters* counters = nullptr) {
  require_valid(x);
  check_letter(a, x.tree.arity());
  auto out = detail::InPlaceEnlarge::run(std::move(x), a, counters);
  canonicalize(out);
  return out;
}

/// Inverse of enlarge: add_root_inv, then rotate_inv, then cut_inv.
inline EdgeMarkedAndLetter reduce(const LeafMarkedTree& t) {
  auto [forest, letter] = rotate_inv(add_root_inv(t));
  return cut_inv(forest, letter);
}

}  // namespace dary
