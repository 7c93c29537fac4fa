#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dary/error.hpp"
#include "dary/marks.hpp"
#include "dary/tree.hpp"
#include "dary/walks.hpp"

namespace dary {

using json = nlohmann::json;

enum class OutputFormat { code, paren, dot, json };

inline OutputFormat parse_format(std::string_view s) {
  if (s == "code") return OutputFormat::code;
  if (s == "paren") return OutputFormat::paren;
  if (s == "dot") return OutputFormat::dot;
  if (s == "json") return OutputFormat::json;
  throw Error(Errc::invalid_argument, "unknown format '" + std::string(s) + "'");
}

/// Leaf = "o", internal node = "(" + its d children + ")".
inline std::string to_paren(const DaryTree& t) {
  std::string out;
  struct Frame {
    NodeId node;
    int next;
  };
  std::vector<Frame> stack{{t.root(), 0}};
  while (!stack.empty()) {
    auto& f = stack.back();
    if (t.is_leaf(f.node)) {
      out += 'o';
      stack.pop_back();
      continue;
    }
    if (f.next == 0) out += '(';
    if (f.next == t.arity()) {
      out += ')';
      stack.pop_back();
      continue;
    }
    NodeId c = t.child(f.node, ++f.next);
    stack.push_back({c, 0});
  }
  return out;
}

inline std::string dot_id(const NodeWord& w, int arity) {
  auto s = to_string(w, arity);
  return arity > 9 ? "\"" + s + "\"" : s;
}

/// Edges parent -> child in slot order; leaves are drawn as points.
inline std::string to_dot(const DaryTree& t) {
  std::string out = "digraph T {\n";
  const auto order = t.preorder();
  for (NodeId v : order) {
    auto id = dot_id(t.node_word(v), t.arity());
    out += "  " + id + (t.is_leaf(v) ? " [shape=point];\n" : " [shape=circle];\n");
  }
  for (NodeId v : order) {
    if (t.is_leaf(v)) continue;
    auto pid = dot_id(t.node_word(v), t.arity());
    for (int k = 1; k <= t.arity(); ++k)
      out += "  " + pid + " -> " + dot_id(t.node_word(t.child(v, k)), t.arity()) + ";\n";
  }
  out += "}\n";
  return out;
}

// --- marked-tree JSON ------------------------------------------------------
// {d, code, marks: [{bud: i} | {edge: word}], leaves: [word...]}

inline json words_json(const DaryTree& t, const std::vector<NodeId>& nodes) {
  std::vector<NodeWord> words;
  for (auto u : nodes) words.push_back(t.node_word(u));
  std::sort(words.begin(), words.end());
  json arr = json::array();
  for (const auto& w : words) arr.push_back(to_string(w, t.arity()));
  return arr;
}

inline json to_json(const DaryTree& t) {
  return json{{"d", t.arity()}, {"code", canonical_code(t)}, {"marks", json::array()}, {"leaves", json::array()}};
}

inline json to_json(const EdgeMarkedTree& x) {
  json j = to_json(x.tree);
  std::vector<int> buds;
  std::vector<NodeId> edges;
  for (const auto& m : x.marks) {
    if (m.is_bud())
      buds.push_back(m.bud_index());
    else
      edges.push_back(m.edge_child());
  }
  std::sort(buds.begin(), buds.end());
  for (int b : buds) j["marks"].push_back(json{{"bud", b}});
  for (const auto& w : words_json(x.tree, edges)) j["marks"].push_back(json{{"edge", w}});
  return j;
}

inline json to_json(const LeafMarkedTree& x) {
  json j = to_json(x.tree);
  j["leaves"] = words_json(x.tree, x.marked_leaves);
  return j;
}

inline json to_json(const MarkedForest& f) {
  json arr = json::array();
  for (const auto& t : f.trees) arr.push_back(to_json(t));
  return arr;
}

inline json to_json(const LukWalk& s) { return json(s.values()); }

namespace detail {

inline DaryTree tree_from_json(const json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("code"))
    throw Error(Errc::parse_error, "marked-tree JSON needs fields d and code");
  int d = j.at("d").get<int>();
  std::vector<int> code;
  if (j.at("code").is_string())
    code = parse_code(j.at("code").get<std::string>());
  else
    code = j.at("code").get<std::vector<int>>();
  return DaryTree::from_preorder_code(d, code);
}

inline NodeId node_at(const DaryTree& t, const std::string& word) {
  auto u = t.find(parse_word(word, t.arity()));
  if (!u) throw Error(Errc::parse_error, "word '" + word + "' is not a node of the tree");
  return *u;
}

}  // namespace detail

inline EdgeMarkedTree edge_marked_from_json(const json& j) {
  try {
    DaryTree t = detail::tree_from_json(j);
    std::vector<MarkTarget> marks;
    if (j.contains("marks")) {
      for (const auto& m : j.at("marks")) {
        if (m.contains("bud"))
          marks.push_back(MarkTarget::bud(m.at("bud").get<int>()));
        else if (m.contains("edge"))
          marks.push_back(MarkTarget::edge(detail::node_at(t, m.at("edge").get<std::string>())));
        else
          throw Error(Errc::parse_error, "mark must be {bud: i} or {edge: word}");
      }
    }
    EdgeMarkedTree x(std::move(t), std::move(marks));
    return x;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

inline LeafMarkedTree leaf_marked_from_json(const json& j) {
  try {
    DaryTree t = detail::tree_from_json(j);
    std::vector<NodeId> leaves;
    if (j.contains("leaves"))
      for (const auto& w : j.at("leaves")) leaves.push_back(detail::node_at(t, w.get<std::string>()));
    return LeafMarkedTree(std::move(t), std::move(leaves));
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

/// A tree in any of the accepted text inputs: preorder code text, or a
/// marked-tree JSON object (marks are ignored). The arity of code text is
/// read from its first non-zero count; default_arity covers "0".
inline DaryTree parse_tree_text(std::string_view text, int default_arity) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    try {
      return detail::tree_from_json(json::parse(text));
    } catch (const json::exception& e) {
      throw Error(Errc::parse_error, e.what());
    }
  }
  auto code = parse_code(text);
  int arity = default_arity;
  for (int c : code)
    if (c != 0) {
      arity = c;
      break;
    }
  return DaryTree::from_preorder_code(arity, code);
}

inline std::string render(const DaryTree& t, OutputFormat f) {
  switch (f) {
    case OutputFormat::code: return canonical_code(t) + "\n";
    case OutputFormat::paren: return to_paren(t) + "\n";
    case OutputFormat::dot: return to_dot(t);
    case OutputFormat::json: return to_json(t).dump() + "\n";
  }
  return {};
}

}  // namespace dary
