#include <gtest/gtest.h>

#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "dary/dary.hpp"
#include "support/builders.hpp"

using namespace dary;
using testing_support::edge_marked;
using testing_support::leaf_marked;
using testing_support::tree_with_internal;

namespace {

// Minimal DOT checker for the subset we emit:
//   graph := "digraph" ID "{" stmt* "}"
//   stmt  := ID "[" ID "=" ID "]" ";" | ID "->" ID ";"
// Returns the edges in order; fails the test on any grammar error.
struct DotGraph {
  std::set<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
};

DotGraph parse_dot(const std::string& text) {
  static const std::regex token(R"(\s*("[^"]*"|->|[{}\[\];=]|[A-Za-z_][A-Za-z_0-9]*|-?(\.[0-9]+|[0-9]+(\.[0-9]*)?)))");
  static const std::regex id(R"("[^"]*"|[A-Za-z_][A-Za-z_0-9]*|-?(\.[0-9]+|[0-9]+(\.[0-9]*)?))");
  std::vector<std::string> toks;
  auto it = text.cbegin();
  std::smatch m;
  while (std::regex_search(it, text.cend(), m, token, std::regex_constants::match_continuous)) {
    toks.push_back(m[1]);
    it = m[0].second;
  }
  EXPECT_TRUE(std::all_of(it, text.cend(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
      << "unlexable text at: " << std::string(it, text.cend());

  DotGraph g;
  std::size_t i = 0;
  auto is_id = [&](std::size_t k) { return k < toks.size() && std::regex_match(toks[k], id); };
  auto expect = [&](const std::string& s) {
    EXPECT_LT(i, toks.size());
    if (i < toks.size()) { EXPECT_EQ(toks[i], s) << "at token " << i; }
    ++i;
  };
  expect("digraph");
  EXPECT_TRUE(is_id(i));
  ++i;
  expect("{");
  while (i < toks.size() && toks[i] != "}") {
    EXPECT_TRUE(is_id(i)) << toks[i];
    const std::string a = toks[i++];
    if (i < toks.size() && toks[i] == "[") {
      ++i;
      EXPECT_TRUE(is_id(i));
      ++i;
      expect("=");
      EXPECT_TRUE(is_id(i));
      ++i;
      expect("]");
      g.nodes.insert(a);
    } else {
      expect("->");
      EXPECT_TRUE(is_id(i));
      g.edges.emplace_back(a, toks[i++]);
    }
    expect(";");
  }
  expect("}");
  EXPECT_EQ(i, toks.size());
  return g;
}

}  // namespace

TEST(Format, Parse) {
  EXPECT_EQ(parse_format("dot"), OutputFormat::dot);
  EXPECT_EQ(parse_format("paren"), OutputFormat::paren);
  EXPECT_THROW(parse_format("xml"), Error);
}

TEST(Paren, Examples) {
  EXPECT_EQ(to_paren(new_root_tree(3)), "o");
  EXPECT_EQ(to_paren(tree_with_internal(2, {""})), "(oo)");
  EXPECT_EQ(to_paren(tree_with_internal(3, {"", "2"})), "(o(ooo)o)");
}

TEST(Paren, DistinguishesAllSmallTrees) {
  std::set<std::string> seen;
  for (const auto& t : enumerate_trees(3, 4)) seen.insert(to_paren(t));
  EXPECT_EQ(seen.size(), 55u);
}

TEST(Dot, RootOnly) {
  auto g = parse_dot(to_dot(new_root_tree(2)));
  EXPECT_EQ(g.nodes, (std::set<std::string>{"e"}));
  EXPECT_TRUE(g.edges.empty());
}

TEST(Dot, BinaryCherry) {
  const auto text = to_dot(tree_with_internal(2, {""}));
  auto g = parse_dot(text);
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.edges[0], std::make_pair(std::string("e"), std::string("1")));
  EXPECT_EQ(g.edges[1], std::make_pair(std::string("e"), std::string("2")));
  EXPECT_NE(text.find("1 [shape=point]"), std::string::npos);
}

TEST(Dot, EveryTreeParsesWithSlotOrderedEdges) {
  for (int d : {2, 3, 12}) {
    auto t = grow_to(d, 40, 3).tree;
    auto g = parse_dot(to_dot(t));
    EXPECT_EQ(g.nodes.size(), t.node_count());
    EXPECT_EQ(g.edges.size(), t.edge_count());
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      EXPECT_TRUE(g.nodes.count(g.edges[k].first));
      EXPECT_TRUE(g.nodes.count(g.edges[k].second));
      if (k % d != 0) { EXPECT_EQ(g.edges[k].first, g.edges[k - 1].first); }
    }
  }
}

TEST(Json, EdgeMarkedRoundTrip) {
  auto x = edge_marked(3, {"", "2", "23"}, {"b1", "23"});
  auto j = to_json(x);
  EXPECT_EQ(j["d"], 3);
  EXPECT_EQ(j["code"], "3 0 3 0 0 3 0 0 0 0");
  EXPECT_EQ(j["marks"][0]["bud"], 1);
  EXPECT_EQ(j["marks"][1]["edge"], "23");
  EXPECT_EQ(edge_marked_from_json(j), x);
}

TEST(Json, LeafMarkedRoundTrip) {
  auto y = leaf_marked(12, {"", "11"}, {"11.3", "12"});
  auto j = to_json(y);
  EXPECT_EQ(j["leaves"], (json{"11.3", "12"}));
  EXPECT_EQ(leaf_marked_from_json(j), y);
}

TEST(Json, Malformed) {
  auto expect_parse_error = [](const json& j) {
    try {
      edge_marked_from_json(j);
      ADD_FAILURE() << j.dump();
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == Errc::parse_error || e.code() == Errc::malformed_code) << e.what();
    }
  };
  expect_parse_error(json{{"code", "0"}});
  expect_parse_error(json{{"d", 2}, {"code", "2 0"}});
  expect_parse_error(json{{"d", 2}, {"code", "2 0 0"}, {"marks", {{{"edge", "3"}}}}});
  expect_parse_error(json{{"d", 2}, {"code", "2 0 0"}, {"marks", {{{"node", "1"}}}}});
  expect_parse_error(json{{"d", "two"}, {"code", "2 0 0"}});
}

TEST(TreeText, CodeAndJson) {
  EXPECT_EQ(canonical_code(parse_tree_text("3 0 3 0 0 0 0\n", 2)), "3 0 3 0 0 0 0");
  EXPECT_EQ(parse_tree_text("0", 4).arity(), 4);
  EXPECT_EQ(canonical_code(parse_tree_text(R"({"d": 2, "code": "2 0 0", "marks": [{"edge": "1"}]})", 3)), "2 0 0");
  EXPECT_THROW(parse_tree_text("2 0", 2), Error);
  EXPECT_THROW(parse_tree_text("{ nope", 2), Error);
}

TEST(Render, AllFormats) {
  auto t = tree_with_internal(2, {""});
  EXPECT_EQ(render(t, OutputFormat::code), "2 0 0\n");
  EXPECT_EQ(render(t, OutputFormat::paren), "(oo)\n");
  EXPECT_EQ(json::parse(render(t, OutputFormat::json))["code"], "2 0 0");
  EXPECT_EQ(render(t, OutputFormat::dot).rfind("digraph", 0), 0u);
}
