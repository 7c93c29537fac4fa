#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dary/error.hpp"

namespace dary {

inline constexpr int kMaxArity = 64;

/// Index of a node record in a tree's arena.
struct NodeId {
  static constexpr std::uint32_t kNone = 0xffffffffu;

  std::uint32_t index = kNone;

  constexpr bool valid() const noexcept { return index != kNone; }
  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

inline constexpr NodeId kNoNode{};

/// Address of a node as the sequence of child slots (each in [1,d]) from the
/// root. The empty word is the root. Comparison is lexicographic, so a
/// strict prefix sorts before any of its extensions.
struct NodeWord {
  std::vector<std::uint16_t> letters;

  bool is_root() const noexcept { return letters.empty(); }
  std::size_t size() const noexcept { return letters.size(); }

  friend auto operator<=>(const NodeWord&, const NodeWord&) = default;
  friend bool operator==(const NodeWord&, const NodeWord&) = default;
};

inline std::strong_ordering lex_compare(const NodeWord& a, const NodeWord& b) {
  return a <=> b;
}

/// "e" for the root; letters are concatenated when d <= 9 and joined with '.'
/// otherwise.
inline std::string to_string(const NodeWord& w, int arity) {
  if (w.is_root()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (arity > 9 && i > 0) out += '.';
    out += std::to_string(w.letters[i]);
  }
  return out;
}

inline NodeWord parse_word(std::string_view text, int arity) {
  NodeWord w;
  if (text == "e" || text.empty()) return w;
  auto push = [&](int v) {
    if (v < 1 || v > arity)
      throw Error(Errc::parse_error, "letter " + std::to_string(v) + " outside [1," +
                                         std::to_string(arity) + "] in word '" + std::string(text) + "'");
    w.letters.push_back(static_cast<std::uint16_t>(v));
  };
  if (arity <= 9) {
    for (char c : text) {
      if (c < '0' || c > '9') throw Error(Errc::parse_error, "bad word '" + std::string(text) + "'");
      push(c - '0');
    }
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto dot = text.find('.', pos);
      auto part = text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
      if (part.empty()) throw Error(Errc::parse_error, "bad word '" + std::string(text) + "'");
      int v = 0;
      for (char c : part) {
        if (c < '0' || c > '9') throw Error(Errc::parse_error, "bad word '" + std::string(text) + "'");
        v = v * 10 + (c - '0');
        if (v > kMaxArity) break;
      }
      push(v);
      if (dot == std::string_view::npos) break;
      pos = dot + 1;
    }
  }
  return w;
}

class DaryTree;

namespace detail {
struct InPlaceEnlarge;
}

/// A plane rooted tree in which every node has either 0 or d children,
/// stored in an index arena. Child slots are numbered 1..d. Removed nodes
/// go on a free list and are reused by later allocations.
class DaryTree {
 public:
  explicit DaryTree(int arity) : arity_(arity) {
    if (arity < 2 || arity > kMaxArity)
      throw Error(Errc::invalid_arity, "arity must be in [2," + std::to_string(kMaxArity) +
                                           "], got " + std::to_string(arity));
    root_ = allocate();
  }

  int arity() const noexcept { return arity_; }
  NodeId root() const noexcept { return root_; }

  std::size_t internal_count() const noexcept { return internal_; }
  std::size_t node_count() const noexcept { return live_count_; }
  std::size_t leaf_count() const noexcept { return live_count_ - internal_; }
  std::size_t edge_count() const noexcept { return live_count_ - 1; }
  /// Arena capacity, including free slots.
  std::size_t arena_size() const noexcept { return parent_.size(); }
  /// True when the arena holds no free slots.
  bool compact() const noexcept { return free_.empty(); }

  void reserve(std::size_t nodes) {
    parent_.reserve(nodes);
    slot_.reserve(nodes);
    live_.reserve(nodes);
    children_.reserve(nodes * static_cast<std::size_t>(arity_));
  }

  bool contains(NodeId u) const noexcept { return u.index < live_.size() && live_[u.index] != 0; }

  bool is_leaf(NodeId u) const {
    check(u);
    return children_[offset(u)] == NodeId::kNone;
  }
  bool is_root(NodeId u) const {
    check(u);
    return u == root_;
  }
  /// kNoNode for the root.
  NodeId parent(NodeId u) const {
    check(u);
    return NodeId{parent_[u.index]};
  }
  /// Slot of u under its parent, 0 for the root.
  int slot(NodeId u) const {
    check(u);
    return slot_[u.index];
  }
  /// k-th child (k in [1,d]); kNoNode for a leaf.
  NodeId child(NodeId u, int k) const {
    check(u);
    if (k < 1 || k > arity_) throw Error(Errc::invalid_argument, "child slot out of range");
    return NodeId{children_[offset(u) + static_cast<std::size_t>(k - 1)]};
  }

  void expand_leaf(NodeId leaf) {
    check(leaf);
    if (!is_leaf(leaf)) throw Error(Errc::not_a_leaf, "node " + std::to_string(leaf.index) + " is internal");
    for (int k = 1; k <= arity_; ++k) {
      NodeId c = allocate();
      link(leaf, k, c);
    }
    ++internal_;
  }

  /// Independent copy of the subtree rooted at u. When map is given it is
  /// resized to arena_size() and receives the copy's id of every copied node.
  DaryTree subtree_copy(NodeId u, std::vector<NodeId>* map = nullptr) const {
    check(u);
    DaryTree out(arity_);
    if (map) map->assign(arena_size(), kNoNode);
    copy_into(*this, u, out, out.root_, map);
    return out;
  }

  /// Removes the descendants of u from this tree, leaving u as a leaf, and
  /// returns them as an independent tree rooted at (a copy of) u.
  DaryTree detach_subtree(NodeId u, std::vector<NodeId>* map = nullptr) {
    check(u);
    if (u == root_) throw Error(Errc::cannot_detach_root, "the root has no parent edge");
    DaryTree out = subtree_copy(u, map);
    if (!is_leaf(u)) {
      std::size_t removed_internal = 0;
      std::vector<std::uint32_t> stack;
      for (int k = 0; k < arity_; ++k) stack.push_back(children_[offset(u) + k]);
      while (!stack.empty()) {
        std::uint32_t v = stack.back();
        stack.pop_back();
        if (children_[offset(NodeId{v})] != NodeId::kNone) {
          ++removed_internal;
          for (int k = 0; k < arity_; ++k) stack.push_back(children_[offset(NodeId{v}) + k]);
        }
        release(NodeId{v});
      }
      ++removed_internal;  // u itself
      for (int k = 0; k < arity_; ++k) children_[offset(u) + k] = NodeId::kNone;
      internal_ -= removed_internal;
    }
    return out;
  }

  /// Replaces `leaf` by a copy of `sub`. Returns the new id of every node of
  /// sub, indexed by its arena index in sub (kNoNode for free slots).
  std::vector<NodeId> graft(NodeId leaf, const DaryTree& sub) {
    check(leaf);
    if (sub.arity_ != arity_)
      throw Error(Errc::arity_mismatch, "cannot graft a " + std::to_string(sub.arity_) + "-ary tree into a " +
                                            std::to_string(arity_) + "-ary tree");
    if (!is_leaf(leaf)) throw Error(Errc::not_a_leaf, "graft target must be a leaf");
    std::vector<NodeId> map(sub.arena_size(), kNoNode);
    copy_into(sub, sub.root_, *this, leaf, &map);
    return map;
  }

  NodeWord node_word(NodeId u) const {
    check(u);
    NodeWord w;
    for (NodeId v = u; v != root_; v = NodeId{parent_[v.index]}) w.letters.push_back(slot_[v.index]);
    std::reverse(w.letters.begin(), w.letters.end());
    return w;
  }

  std::optional<NodeId> find(const NodeWord& w) const {
    NodeId v = root_;
    for (auto letter : w.letters) {
      if (letter < 1 || letter > arity_ || is_leaf(v)) return std::nullopt;
      v = NodeId{children_[offset(v) + letter - 1]};
    }
    return v;
  }

  std::size_t depth(NodeId u) const {
    check(u);
    std::size_t h = 0;
    for (NodeId v = u; v != root_; v = NodeId{parent_[v.index]}) ++h;
    return h;
  }

  /// Depth-first preorder, children in slot order; this is also the
  /// lexicographic order of the node words.
  std::vector<NodeId> preorder(NodeId from) const {
    check(from);
    std::vector<NodeId> out;
    std::vector<std::uint32_t> stack{from.index};
    while (!stack.empty()) {
      NodeId v{stack.back()};
      stack.pop_back();
      out.push_back(v);
      if (children_[offset(v)] != NodeId::kNone)
        for (int k = arity_ - 1; k >= 0; --k) stack.push_back(children_[offset(v) + k]);
    }
    return out;
  }
  std::vector<NodeId> preorder() const { return preorder(root_); }

  std::size_t height() const {
    std::size_t best = 0;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{root_.index, 0}};
    while (!stack.empty()) {
      auto [v, h] = stack.back();
      stack.pop_back();
      best = std::max(best, h);
      if (children_[offset(NodeId{v})] != NodeId::kNone)
        for (int k = 0; k < arity_; ++k) stack.emplace_back(children_[offset(NodeId{v}) + k], h + 1);
    }
    return best;
  }

  /// Preorder child counts (each 0 or d).
  std::vector<int> to_preorder_code() const {
    std::vector<int> code;
    code.reserve(live_count_);
    for (NodeId v : preorder()) code.push_back(children_[offset(v)] == NodeId::kNone ? 0 : arity_);
    return code;
  }

  static DaryTree from_preorder_code(int arity, std::span<const int> code) {
    DaryTree t(arity);
    if (code.empty()) throw Error(Errc::malformed_code, "empty code");
    // (node, next slot to fill) for internal nodes with open slots
    std::vector<std::pair<NodeId, int>> open;
    std::size_t i = 0;
    NodeId cur = t.root_;
    for (;;) {
      if (i >= code.size()) throw Error(Errc::malformed_code, "code ends before the tree is complete");
      int c = code[i++];
      if (c == arity) {
        t.expand_leaf(cur);
        open.emplace_back(cur, 1);
      } else if (c != 0) {
        throw Error(Errc::malformed_code, "child count " + std::to_string(c) + " is neither 0 nor " +
                                              std::to_string(arity));
      }
      while (!open.empty() && open.back().second > arity) open.pop_back();
      if (open.empty()) break;
      auto& [node, next] = open.back();
      cur = t.child(node, next++);
    }
    if (i != code.size()) throw Error(Errc::malformed_code, "trailing symbols after a complete tree");
    return t;
  }

  /// Non-root live node of the given rank in arena order. O(1) on compact
  /// arenas, linear otherwise.
  NodeId nonroot_node_by_rank(std::size_t rank) const {
    if (rank >= edge_count()) throw Error(Errc::invalid_argument, "edge rank out of range");
    if (compact()) return NodeId{static_cast<std::uint32_t>(rank < root_.index ? rank : rank + 1)};
    for (std::uint32_t i = 0; i < live_.size(); ++i) {
      if (!live_[i] || i == root_.index) continue;
      if (rank-- == 0) return NodeId{i};
    }
    return kNoNode;
  }

  friend bool operator==(const DaryTree& a, const DaryTree& b) {
    return a.arity_ == b.arity_ && a.internal_ == b.internal_ && a.to_preorder_code() == b.to_preorder_code();
  }

 private:
  friend struct detail::InPlaceEnlarge;

  std::size_t offset(NodeId u) const noexcept { return static_cast<std::size_t>(u.index) * arity_; }

  void check(NodeId u) const {
    if (!contains(u)) throw Error(Errc::stale_node, "node id " + std::to_string(u.index) + " is not live");
  }

  NodeId allocate() {
    NodeId u;
    if (!free_.empty()) {
      u = NodeId{free_.back()};
      free_.pop_back();
      live_[u.index] = 1;
      parent_[u.index] = NodeId::kNone;
      slot_[u.index] = 0;
      std::fill_n(children_.begin() + static_cast<std::ptrdiff_t>(offset(u)), arity_, NodeId::kNone);
    } else {
      u = NodeId{static_cast<std::uint32_t>(parent_.size())};
      parent_.push_back(NodeId::kNone);
      slot_.push_back(0);
      live_.push_back(1);
      children_.insert(children_.end(), static_cast<std::size_t>(arity_), NodeId::kNone);
    }
    ++live_count_;
    return u;
  }

  void release(NodeId u) {
    live_[u.index] = 0;
    parent_[u.index] = NodeId::kNone;
    free_.push_back(u.index);
    --live_count_;
  }

  void link(NodeId p, int k, NodeId c) {
    children_[offset(p) + static_cast<std::size_t>(k - 1)] = c.index;
    parent_[c.index] = p.index;
    slot_[c.index] = static_cast<std::uint16_t>(k);
  }

  /// Copies the subtree of src at src_root onto the leaf dst_leaf of dst.
  static void copy_into(const DaryTree& src, NodeId src_root, DaryTree& dst, NodeId dst_leaf,
                        std::vector<NodeId>* map) {
    std::vector<std::pair<std::uint32_t, NodeId>> stack{{src_root.index, dst_leaf}};
    while (!stack.empty()) {
      auto [s, d] = stack.back();
      stack.pop_back();
      if (map) (*map)[s] = d;
      if (src.children_[src.offset(NodeId{s})] == NodeId::kNone) continue;
      dst.expand_leaf(d);
      for (int k = 0; k < src.arity_; ++k)
        stack.emplace_back(src.children_[src.offset(NodeId{s}) + k], NodeId{dst.children_[dst.offset(d) + k]});
    }
  }

  int arity_;
  NodeId root_;
  std::size_t internal_ = 0;
  std::size_t live_count_ = 0;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint16_t> slot_;
  std::vector<std::uint8_t> live_;
  std::vector<std::uint32_t> children_;
  std::vector<std::uint32_t> free_;
};

inline DaryTree new_root_tree(int arity) { return DaryTree(arity); }

inline std::string code_to_string(std::span<const int> code) {
  std::string out;
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(code[i]);
  }
  return out;
}

/// Canonical identity of a tree shape: its preorder code as text.
inline std::string canonical_code(const DaryTree& t) { return code_to_string(t.to_preorder_code()); }

/// Parses whitespace-separated decimal child counts.
inline std::vector<int> parse_code(std::string_view text) {
  std::vector<int> code;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    int v = 0;
    for (char c : tok) {
      if (c < '0' || c > '9') throw Error(Errc::malformed_code, "non-numeric symbol '" + tok + "'");
      v = v * 10 + (c - '0');
      if (v > kMaxArity) throw Error(Errc::malformed_code, "child count too large: " + tok);
    }
    code.push_back(v);
  }
  return code;
}

}  // namespace dary

template <>
struct std::hash<dary::NodeId> {
  std::size_t operator()(dary::NodeId u) const noexcept { return std::hash<std::uint32_t>{}(u.index); }
};
