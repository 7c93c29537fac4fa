#pragma once

#include "dary/bijections.hpp"

namespace dary {

/// Side letter of the binary-only growth maps. Left is child slot 1, right
/// is child slot 2. Deliberately not convertible to Letter.
enum class BinaryLetter { right, left };

inline const char* to_string(BinaryLetter a) { return a == BinaryLetter::right ? "r" : "l"; }

namespace detail {

inline int side_slot(BinaryLetter a) { return a == BinaryLetter::right ? 2 : 1; }

inline void require_binary(const EdgeMarkedTree& x) {
  if (x.tree.arity() != 2)
    throw Error(Errc::invalid_arity, "binary growth maps need d = 2, got " + std::to_string(x.tree.arity()));
  require_valid(x);
}

/// New root; the marked leaf hangs on side a, the old tree on the other side.
inline LeafMarkedTree grow_above_root(const DaryTree& old, BinaryLetter a) {
  DaryTree t(2);
  t.expand_leaf(t.root());
  const int side = side_slot(a);
  t.graft(t.child(t.root(), 3 - side), old);
  NodeId mark = t.child(t.root(), side);
  return LeafMarkedTree(std::move(t), {mark});
}

}  // namespace detail

/// Remy's map: a new internal node w is inserted in the middle of the marked
/// edge (u, p(u)); its child on side a is a new marked leaf and u hangs on
/// the other side. The bud case puts w above the root.
inline LeafMarkedTree remy_enlarge(const EdgeMarkedTree& x, BinaryLetter a) {
  detail::require_binary(x);
  const MarkTarget m = x.marks.front();
  if (m.is_bud()) return detail::grow_above_root(x.tree, a);

  DaryTree t = x.tree;
  const NodeId u = m.edge_child();
  DaryTree below = t.detach_subtree(u);
  t.expand_leaf(u);  // u's slot now holds w
  const int side = detail::side_slot(a);
  t.graft(t.child(u, 3 - side), below);
  NodeId mark = t.child(u, side);
  return LeafMarkedTree(std::move(t), {mark});
}

/// Third binary map: for a marked edge (u, p(u)) the subtree T at u is
/// detached and u stays as the marked leaf; a node v is inserted in the edge
/// above p(u) (a new root when p(u) is the root), v gets a new child w on
/// side a, and T is grafted at w. The bud case is Remy's.
inline LeafMarkedTree third_enlarge(const EdgeMarkedTree& x, BinaryLetter a) {
  detail::require_binary(x);
  const MarkTarget m = x.marks.front();
  if (m.is_bud()) return detail::grow_above_root(x.tree, a);

  DaryTree t = x.tree;
  const NodeId u = m.edge_child();
  const NodeId p = t.parent(u);
  DaryTree moved = t.detach_subtree(u);
  const int side = detail::side_slot(a);

  if (t.is_root(p)) {
    DaryTree out(2);
    out.expand_leaf(out.root());
    out.graft(out.child(out.root(), side), moved);
    auto map = out.graft(out.child(out.root(), 3 - side), t);
    NodeId mark = map[u.index];
    return LeafMarkedTree(std::move(out), {mark});
  }

  std::vector<NodeId> inner;
  DaryTree upper = t.detach_subtree(p, &inner);
  const NodeId u_in_upper = inner[u.index];
  t.expand_leaf(p);  // p's slot now holds v
  t.graft(t.child(p, side), moved);
  auto map = t.graft(t.child(p, 3 - side), upper);
  NodeId mark = map[u_in_upper.index];
  return LeafMarkedTree(std::move(t), {mark});
}

}  // namespace dary
