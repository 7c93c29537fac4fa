#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dary/cli.hpp"
#include "support/builders.hpp"

using namespace dary;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << body;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class SeedEnv : public ::testing::Test {
 protected:
  void SetUp() override { unsetenv("DARY_SEED"); }
  void TearDown() override { unsetenv("DARY_SEED"); }
};

}  // namespace

TEST(CliGrow, Examples) {
  auto r0 = run({"grow", "--d", "3", "--n", "0", "--format", "code"});
  EXPECT_EQ(r0.code, 0);
  EXPECT_EQ(r0.out, "0\n");
  auto r1 = run({"grow", "--d", "3", "--n", "1", "--format", "code"});
  EXPECT_EQ(r1.out, "3 0 0 0\n");
}

TEST(CliGrow, DeterministicAndMatchesGolden) {
  auto a = run({"grow", "--d", "2", "--n", "1000", "--seed", "5", "--format", "code"});
  auto b = run({"grow", "--d", "2", "--n", "1000", "--seed", "5", "--format", "code"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, slurp(std::string(DARY_GOLDEN_DIR) + "/grow_d2_n1000_seed5.code"));
  EXPECT_NE(a.err.find("seed: 5"), std::string::npos);
}

TEST(CliGrow, EmitEveryAndCounters) {
  auto r = run({"grow", "--d", "2", "--n", "10", "--seed", "1", "--emit-every", "3", "--counters"});
  EXPECT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::vector<std::string> snaps;
  for (std::string l; std::getline(lines, l);) snaps.push_back(l);
  ASSERT_EQ(snaps.size(), 4u);  // steps 3, 6, 9 and the final tree
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_EQ(DaryTree::from_preorder_code(2, parse_code(snaps[i])).internal_count(), 3 * (i + 1));
  auto last_line = r.err.substr(r.err.find('{'));
  auto counters = json::parse(last_line);
  EXPECT_EQ(counters["node_allocations"], 20);
  EXPECT_EQ(counters["steps"], 10);
}

TEST(CliGrow, Formats) {
  EXPECT_EQ(run({"grow", "--d", "2", "--n", "1", "--format", "paren"}).out, "(oo)\n");
  auto dot = run({"grow", "--d", "2", "--n", "1", "--format", "dot"}).out;
  EXPECT_NE(dot.find("e -> 1;"), std::string::npos);
  EXPECT_EQ(json::parse(run({"grow", "--d", "3", "--n", "1", "--format", "json"}).out)["code"], "3 0 0 0");
}

TEST(CliGrow, UsageErrors) {
  EXPECT_EQ(run({"grow", "--d", "3"}).code, 2);
  EXPECT_EQ(run({"grow", "--d", "1", "--n", "3"}).code, 2);
  EXPECT_EQ(run({"grow", "--d", "3", "--n", "3", "--format", "svg"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST(CliGrow, GuardViolation) {
  auto r = run({"grow", "--d", "2", "--n", "3000000000"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("does not fit"), std::string::npos);
}

TEST_F(SeedEnv, SeedFromEnvironment) {
  setenv("DARY_SEED", "5", 1);
  auto env = run({"grow", "--d", "2", "--n", "50"});
  auto flag = run({"grow", "--d", "2", "--n", "50", "--seed", "5"});
  EXPECT_EQ(env.out, flag.out);
  EXPECT_NE(env.err.find("seed: 5"), std::string::npos);
  auto override = run({"grow", "--d", "2", "--n", "50", "--seed", "6"});
  EXPECT_NE(override.err.find("seed: 6"), std::string::npos);
  setenv("DARY_SEED", "banana", 1);
  EXPECT_EQ(run({"grow", "--d", "2", "--n", "5"}).code, 2);
}

TEST_F(SeedEnv, DefaultSeedIsZero) {
  auto r = run({"grow", "--d", "2", "--n", "5"});
  EXPECT_NE(r.err.find("seed: 0"), std::string::npos);
  EXPECT_EQ(r.out, run({"grow", "--d", "2", "--n", "5", "--seed", "0"}).out);
}

TEST(CliVerify, Bijection) {
  auto r = run({"verify", "bijection", "--d", "3", "--max-n", "3"});
  EXPECT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["counts"]["runs"].size(), 4u);
}

TEST(CliVerify, Rotation) {
  auto r = run({"verify", "rotation", "--m", "7", "--max-inc", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["pass"].get<bool>());
}

TEST(CliVerify, Counts) {
  auto r = run({"verify", "counts", "--d", "3", "--n", "2"});
  EXPECT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["counts"]["count"], "3");
  EXPECT_EQ(j["counts"]["enumerated"], 3);
  auto big = json::parse(run({"verify", "counts", "--d", "2", "--n", "100"}).out);
  EXPECT_EQ(big["counts"]["count"], "896519947090131496687170070074100632420837521538745909320");
  EXPECT_FALSE(big["counts"].contains("enumerated"));
}

TEST(CliVerify, Variants) {
  auto r = run({"verify", "variants", "--max-n", "3"});
  EXPECT_EQ(r.code, 0);
}

TEST(CliVerify, GuardViolation) {
  EXPECT_EQ(run({"verify", "bijection", "--d", "2", "--max-n", "14"}).code, 1);
  EXPECT_EQ(run({"verify"}).code, 2);
}

TEST(CliUniform, PassesAtTheDocumentedSeed) {
  auto r = run({"uniform", "--d", "3", "--n", "4", "--samples", "110000", "--seed", "42", "--alpha", "0.001"});
  EXPECT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["classes"], 55);
  EXPECT_GE(j["p_value"].get<double>(), 0.001);
}

TEST(CliUniform, SingleClass) {
  auto r = run({"uniform", "--d", "3", "--n", "1", "--samples", "100", "--seed", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["statistic"], 0.0);
}

TEST(CliUniform, BiasedLetterFails) {
  auto r = run({"uniform", "--d", "3", "--n", "3", "--samples", "12000", "--seed", "1", "--test-force-letter", "1"});
  EXPECT_EQ(r.code, 1);
}

TEST(CliUniform, Underpowered) {
  EXPECT_EQ(run({"uniform", "--d", "3", "--n", "4", "--samples", "100"}).code, 2);
}

TEST(CliUniform, HiddenHookNotInHelp) {
  auto r = run({"uniform", "--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find("force"), std::string::npos);
}

TEST(CliTrace, RootOnlyLetterThree) {
  auto path = write_temp("trace_n0.json", R"({"d": 3, "code": "0", "marks": [{"bud": 0}, {"bud": 1}]})");
  auto r = run({"trace", "--d", "3", "--input", path, "--letter", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto frames = json::parse(r.out);
  ASSERT_EQ(frames.size(), 3u);
  EXPECT_EQ(frames[0]["map"], "cut");
  EXPECT_EQ(frames[1]["map"], "rotate");
  EXPECT_EQ(frames[2]["map"], "add_root");
  EXPECT_EQ(frames[2]["tree"]["code"], "3 0 0 0");
  EXPECT_EQ(frames[2]["tree"]["leaves"], (json{"1", "2"}));
}

TEST(CliTrace, FiveAryLeafSequence) {
  auto x = testing_support::edge_marked(5, {"", "1", "11", "3", "31", "32", "5", "51"}, {"b3", "1", "3", "31"});
  auto path = write_temp("trace_five.json", to_json(x).dump());
  auto r = run({"trace", "--input", path, "--letter", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto frames = json::parse(r.out);
  EXPECT_EQ(frames[0]["leaf_sequence"], (json{0, 1, 0, 0, 0, -1}));
  EXPECT_EQ(frames[0]["steps"].size(), 3u);
  EXPECT_EQ(frames[1]["leaf_sequence"], (json{0, 0, 0, -1, 0, -1}));
}

TEST(CliTrace, ThenReduceReproducesInput) {
  auto x = testing_support::edge_marked(3, {"", "2", "21"}, {"21", "3"});
  auto in = write_temp("trace_rt_in.json", to_json(x).dump());
  auto traced = run({"trace", "--input", in, "--letter", "2"});
  ASSERT_EQ(traced.code, 0) << traced.err;
  auto trace_file = write_temp("trace_rt_frames.json", traced.out);
  auto reduced = run({"reduce", "--input", trace_file});
  ASSERT_EQ(reduced.code, 0) << reduced.err;
  auto j = json::parse(reduced.out);
  EXPECT_EQ(j["letter"], 2);
  EXPECT_EQ(edge_marked_from_json(j["marked"]), x);
}

TEST(CliTrace, MalformedInput) {
  auto bad = write_temp("trace_bad.json", "{ this is not json");
  EXPECT_EQ(run({"trace", "--input", bad, "--letter", "1"}).code, 2);
  auto wrong_marks = write_temp("trace_marks.json", R"({"d": 3, "code": "0", "marks": [{"bud": 0}]})");
  EXPECT_EQ(run({"trace", "--input", wrong_marks, "--letter", "1"}).code, 2);
  auto ok = write_temp("trace_ok.json", R"({"d": 3, "code": "0", "marks": [{"bud": 0}, {"bud": 1}]})");
  EXPECT_EQ(run({"trace", "--d", "4", "--input", ok, "--letter", "1"}).code, 2);
  EXPECT_EQ(run({"trace", "--input", ok, "--letter", "4"}).code, 2);
  EXPECT_EQ(run({"trace", "--input", ::testing::TempDir() + "missing.json", "--letter", "1"}).code, 2);
}

TEST(CliEnlarge, MatchesLibrary) {
  auto x = testing_support::edge_marked(2, {""}, {"1"});
  auto in = write_temp("enl.json", to_json(x).dump());
  auto r = run({"enlarge", "--input", in, "--letter", "1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(leaf_marked_from_json(json::parse(r.out)), enlarge(x, Letter{1}));
}

TEST(CliExport, Dot) {
  auto root = write_temp("export_root.code", "0\n");
  auto r = run({"export", "--format", "dot", "--input", root});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "digraph T {\n  e [shape=point];\n}\n");
  auto cherry = write_temp("export_cherry.code", "2 0 0\n");
  auto c = run({"export", "--format", "dot", "--input", cherry});
  EXPECT_NE(c.out.find("e -> 1;\n  e -> 2;"), std::string::npos);
  auto bad = write_temp("export_bad.code", "2 0\n");
  EXPECT_EQ(run({"export", "--input", bad}).code, 2);
}

TEST(CliHeights, Describes) {
  auto r = run({"heights", "--d", "2", "--n", "1", "--reps", "3", "--seed", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["max"], 1);
}
