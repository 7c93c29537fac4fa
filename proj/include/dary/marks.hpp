#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dary/error.hpp"
#include "dary/tree.hpp"
#include "dary/walks.hpp"

namespace dary {

/// A markable element of E(t) u Buds(d): either one of the d-1 buds, or the
/// edge above a non-root node (edges are named by their child).
class MarkTarget {
 public:
  enum class Kind : std::uint8_t { bud, edge };

  static MarkTarget bud(int index) { return MarkTarget(Kind::bud, static_cast<std::uint32_t>(index)); }
  static MarkTarget edge(NodeId child) { return MarkTarget(Kind::edge, child.index); }

  Kind kind() const noexcept { return kind_; }
  bool is_bud() const noexcept { return kind_ == Kind::bud; }
  bool is_edge() const noexcept { return kind_ == Kind::edge; }
  int bud_index() const noexcept { return static_cast<int>(value_); }
  NodeId edge_child() const noexcept { return NodeId{value_}; }

  friend bool operator==(const MarkTarget&, const MarkTarget&) = default;
  friend auto operator<=>(const MarkTarget&, const MarkTarget&) = default;

 private:
  MarkTarget(Kind k, std::uint32_t v) : kind_(k), value_(v) {}
  Kind kind_;
  std::uint32_t value_;
};

struct EdgeMarkedTree {
  DaryTree tree;
  std::vector<MarkTarget> marks;

  EdgeMarkedTree(DaryTree t, std::vector<MarkTarget> m) : tree(std::move(t)), marks(std::move(m)) {}
};

struct LeafMarkedTree {
  DaryTree tree;
  std::vector<NodeId> marked_leaves;

  explicit LeafMarkedTree(DaryTree t, std::vector<NodeId> m = {})
      : tree(std::move(t)), marked_leaves(std::move(m)) {}

  std::size_t mark_count() const noexcept { return marked_leaves.size(); }
  int arity() const noexcept { return tree.arity(); }
};

/// Ordered d-tuple of leaf-marked trees; position i sits under root slot i+1
/// once a root is added.
struct MarkedForest {
  std::vector<LeafMarkedTree> trees;

  int arity() const { return trees.empty() ? 0 : trees.front().arity(); }
  std::size_t total_marks() const {
    std::size_t n = 0;
    for (const auto& t : trees) n += t.mark_count();
    return n;
  }
  std::size_t internal_count() const {
    std::size_t n = 0;
    for (const auto& t : trees) n += t.tree.internal_count();
    return n;
  }
};

/// Single node, marked at its root.
inline LeafMarkedTree marked_singleton(int arity) {
  DaryTree t(arity);
  NodeId r = t.root();
  return LeafMarkedTree(std::move(t), {r});
}

inline bool is_marked_singleton(const LeafMarkedTree& t) {
  return t.tree.internal_count() == 0 && t.marked_leaves.size() == 1;
}

// --- canonical forms -------------------------------------------------------

/// Buds by index, then edges by lexicographic order of their child word.
inline void canonicalize(EdgeMarkedTree& x) {
  std::vector<std::pair<NodeWord, MarkTarget>> edges;
  std::vector<MarkTarget> buds;
  for (const auto& m : x.marks) {
    if (m.is_bud())
      buds.push_back(m);
    else
      edges.emplace_back(x.tree.node_word(m.edge_child()), m);
  }
  std::sort(buds.begin(), buds.end());
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  x.marks = std::move(buds);
  for (auto& e : edges) x.marks.push_back(e.second);
}

inline void canonicalize(LeafMarkedTree& x) {
  std::vector<std::pair<NodeWord, NodeId>> v;
  for (auto u : x.marked_leaves) v.emplace_back(x.tree.node_word(u), u);
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  x.marked_leaves.clear();
  for (auto& p : v) x.marked_leaves.push_back(p.second);
}

inline std::string canonical_key(const EdgeMarkedTree& x) {
  std::vector<int> buds;
  std::vector<NodeWord> edges;
  for (const auto& m : x.marks) {
    if (m.is_bud())
      buds.push_back(m.bud_index());
    else
      edges.push_back(x.tree.node_word(m.edge_child()));
  }
  std::sort(buds.begin(), buds.end());
  std::sort(edges.begin(), edges.end());
  std::string key = canonical_code(x.tree) + "|";
  for (int b : buds) key += "b" + std::to_string(b) + " ";
  for (const auto& w : edges) key += to_string(w, x.tree.arity()) + " ";
  return key;
}

inline std::string canonical_key(const LeafMarkedTree& x) {
  std::vector<NodeWord> words;
  for (auto u : x.marked_leaves) words.push_back(x.tree.node_word(u));
  std::sort(words.begin(), words.end());
  std::string key = canonical_code(x.tree) + "|";
  for (const auto& w : words) key += to_string(w, x.tree.arity()) + " ";
  return key;
}

inline std::string canonical_key(const MarkedForest& f) {
  std::string key;
  for (const auto& t : f.trees) key += "[" + canonical_key(t) + "]";
  return key;
}

inline bool operator==(const EdgeMarkedTree& a, const EdgeMarkedTree& b) {
  return canonical_key(a) == canonical_key(b);
}
inline bool operator==(const LeafMarkedTree& a, const LeafMarkedTree& b) {
  return canonical_key(a) == canonical_key(b);
}
inline bool operator==(const MarkedForest& a, const MarkedForest& b) {
  return canonical_key(a) == canonical_key(b);
}

// --- leaf sequences --------------------------------------------------------

/// s_i = sum over j < i of (marks in tree j) - 1.
inline LukWalk leaf_sequence(const MarkedForest& f) {
  const auto d = static_cast<std::size_t>(f.arity());
  if (f.trees.empty() || f.total_marks() + 1 != d)
    throw Error(Errc::mark_count, "a forest of " + std::to_string(f.trees.size()) + " trees carries " +
                                      std::to_string(f.total_marks()) + " marks, expected d-1");
  std::vector<std::int64_t> inc;
  inc.reserve(f.trees.size());
  for (const auto& t : f.trees) inc.push_back(static_cast<std::int64_t>(t.mark_count()) - 1);
  return LukWalk::from_increments(inc);
}

inline bool is_excursion_forest(const MarkedForest& f) { return is_excursion(leaf_sequence(f)); }

// --- validation ------------------------------------------------------------

struct Violation {
  std::string message;
};

inline std::vector<Violation> validate(const EdgeMarkedTree& x) {
  std::vector<Violation> out;
  const int d = x.tree.arity();
  if (x.marks.size() != static_cast<std::size_t>(d - 1))
    out.push_back({"expected " + std::to_string(d - 1) + " marks, found " + std::to_string(x.marks.size())});
  std::set<MarkTarget> seen;
  for (const auto& m : x.marks) {
    if (!seen.insert(m).second) out.push_back({"duplicate mark"});
    if (m.is_bud()) {
      if (m.bud_index() < 0 || m.bud_index() > d - 2)
        out.push_back({"bud index " + std::to_string(m.bud_index()) + " outside [0," + std::to_string(d - 2) + "]"});
    } else {
      NodeId u = m.edge_child();
      if (!x.tree.contains(u))
        out.push_back({"edge mark names a node that is not in the tree"});
      else if (x.tree.is_root(u))
        out.push_back({"the root carries no edge"});
    }
  }
  return out;
}

inline std::vector<Violation> validate(const LeafMarkedTree& x) {
  std::vector<Violation> out;
  std::unordered_set<NodeId> seen;
  for (auto u : x.marked_leaves) {
    if (!seen.insert(u).second) out.push_back({"duplicate marked leaf"});
    if (!x.tree.contains(u))
      out.push_back({"marked node is not in the tree"});
    else if (!x.tree.is_leaf(u))
      out.push_back({"marked node is internal"});
  }
  return out;
}

/// Also checks that the forest carries exactly d-1 marks in total.
inline std::vector<Violation> validate(const MarkedForest& f) {
  std::vector<Violation> out;
  if (f.trees.empty()) {
    out.push_back({"empty forest"});
    return out;
  }
  const int d = f.arity();
  if (f.trees.size() != static_cast<std::size_t>(d))
    out.push_back({"forest has " + std::to_string(f.trees.size()) + " trees, expected " + std::to_string(d)});
  for (std::size_t i = 0; i < f.trees.size(); ++i) {
    if (f.trees[i].arity() != d) out.push_back({"tree " + std::to_string(i) + " has a different arity"});
    for (auto& v : validate(f.trees[i])) out.push_back({"tree " + std::to_string(i) + ": " + v.message});
  }
  if (f.total_marks() != static_cast<std::size_t>(d - 1))
    out.push_back({"forest carries " + std::to_string(f.total_marks()) + " marks, expected " +
                   std::to_string(d - 1)});
  return out;
}

/// Throws malformed_marks listing every violation.
template <typename T>
void require_valid(const T& x) {
  auto v = validate(x);
  if (v.empty()) return;
  std::string msg;
  for (const auto& e : v) msg += (msg.empty() ? "" : "; ") + e.message;
  throw Error(Errc::malformed_marks, msg);
}

}  // namespace dary
