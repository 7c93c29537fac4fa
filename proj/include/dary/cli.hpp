#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dary/binary_variants.hpp"
#include "dary/bijections.hpp"
#include "dary/io.hpp"
#include "dary/oracle.hpp"
#include "dary/sampler.hpp"

namespace dary::cli {

/// Process exit codes.
enum Exit : int { ok = 0, check_failed = 1, usage = 2 };

namespace detail {

inline std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

/// --seed, else $DARY_SEED, else 0. Printed to stderr.
inline std::uint64_t effective_seed(const CLI::Option* flag, std::uint64_t flag_value, std::ostream& err) {
  std::uint64_t seed = 0;
  if (flag->count() > 0) {
    seed = flag_value;
  } else if (const char* env = std::getenv("DARY_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::logic_error&) {
      throw Error(Errc::invalid_argument, std::string("DARY_SEED is not an unsigned integer: ") + env);
    }
  }
  err << "seed: " << seed << "\n";
  return seed;
}

inline int exit_code_for(Errc e) {
  switch (e) {
    case Errc::size_guard:
    case Errc::corrupt_input: return Exit::check_failed;
    default: return Exit::usage;
  }
}

inline json counters_json(const OpCounters& c, std::uint64_t steps) {
  return json{{"steps", steps},
              {"node_allocations", c.node_allocations},
              {"link_redirections", c.link_redirections},
              {"rng_draws", c.rng_draws},
              {"lex_letters_compared", c.lex_letters_compared}};
}

/// Runs a family of reports and folds them into one.
inline Report merge_reports(std::string check, json params, const std::vector<Report>& parts) {
  Report all;
  all.check = std::move(check);
  all.params = std::move(params);
  all.counts["runs"] = json::array();
  for (const auto& p : parts) {
    all.counts["runs"].push_back(p.to_json());
    if (!p.pass) all.fail(p.counterexample.value_or(json::object()));
  }
  return all;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grow uniform random d-ary trees one node at a time, and check the growth bijection."};
  app.require_subcommand(1);
  app.name("dary");

  // grow
  auto* grow = app.add_subcommand("grow", "Grow a uniform tree with n internal nodes");
  int g_d = 2;
  std::uint64_t g_n = 0, g_seed = 0, g_every = 0;
  std::string g_format = "code";
  bool g_counters = false;
  grow->add_option("--d", g_d, "Arity (>= 2)")->required();
  grow->add_option("--n", g_n, "Internal nodes")->required();
  auto* g_seed_opt = grow->add_option("--seed", g_seed, "Seed (default: $DARY_SEED, else 0)");
  grow->add_option("--format", g_format, "code | paren | dot | json")
      ->check(CLI::IsMember({"code", "paren", "dot", "json"}));
  grow->add_option("--emit-every", g_every, "Also emit the tree every k steps");
  grow->add_flag("--counters", g_counters, "Print a JSON counter summary on stderr");

  // verify
  auto* verify = app.add_subcommand("verify", "Run an exhaustive oracle check");
  verify->require_subcommand(1);
  bool v_unguarded = false;
  verify->add_flag("--no-guard", v_unguarded, "Lift the enumeration size guard");
  auto* v_bij = verify->add_subcommand("bijection", "enlarge is a bijection, reduce is its inverse");
  int vb_d = 3;
  std::uint64_t vb_max_n = 2;
  v_bij->add_option("--d", vb_d, "Arity")->required();
  v_bij->add_option("--max-n", vb_max_n, "Check every n in [0, max-n]");
  auto* v_rot = verify->add_subcommand("rotation", "Rotation classes of Lukasiewicz walks");
  std::size_t vr_m = 5;
  std::int64_t vr_inc = 3;
  v_rot->add_option("--m", vr_m, "Check every length in [1, m]");
  v_rot->add_option("--max-inc", vr_inc, "Largest increment");
  auto* v_var = verify->add_subcommand("variants", "Remy's map and the third binary map");
  std::uint64_t vv_max_n = 3;
  v_var->add_option("--max-n", vv_max_n, "Check every n in [0, max-n]");
  auto* v_cnt = verify->add_subcommand("counts", "Exact tree count, cross-checked by enumeration");
  int vc_d = 2;
  std::uint64_t vc_n = 0;
  v_cnt->add_option("--d", vc_d, "Arity")->required();
  v_cnt->add_option("--n", vc_n, "Internal nodes")->required();

  // uniform
  auto* uni = app.add_subcommand("uniform", "Chi-square test of the sampler over A_n^d");
  int u_d = 3;
  std::uint64_t u_n = 4, u_samples = 110000, u_seed = 0;
  double u_alpha = 0.001;
  int u_force = 0;
  uni->add_option("--d", u_d, "Arity")->required();
  uni->add_option("--n", u_n, "Internal nodes")->required();
  uni->add_option("--samples", u_samples, "Number of grown trees");
  auto* u_seed_opt = uni->add_option("--seed", u_seed, "Seed (default: $DARY_SEED, else 0)");
  uni->add_option("--alpha", u_alpha, "Significance level");
  uni->add_option("--test-force-letter", u_force, "Test hook: always use this letter")->group("");

  // trace
  auto* trace = app.add_subcommand("trace", "Frames of cut, rotate and add_root on one input");
  int t_d = 0, t_letter = 1;
  std::string t_input;
  trace->add_option("--d", t_d, "Expected arity of the input");
  trace->add_option("--input", t_input, "Edge-marked tree JSON file ('-' for stdin)")->required();
  trace->add_option("--letter", t_letter, "Letter in [1, d]")->required();

  // enlarge / reduce
  auto* enl = app.add_subcommand("enlarge", "Apply the growth bijection to an edge-marked tree");
  std::string e_input;
  int e_letter = 1;
  enl->add_option("--input", e_input, "Edge-marked tree JSON file")->required();
  enl->add_option("--letter", e_letter, "Letter in [1, d]")->required();
  auto* red = app.add_subcommand("reduce", "Invert the growth bijection");
  std::string r_input;
  red->add_option("--input", r_input, "Leaf-marked tree JSON, or a trace whose last frame is used")->required();

  // export
  auto* exp = app.add_subcommand("export", "Convert a tree to another format");
  std::string x_format = "dot", x_input;
  int x_d = 2;
  exp->add_option("--format", x_format, "code | paren | dot | json")
      ->check(CLI::IsMember({"code", "paren", "dot", "json"}));
  exp->add_option("--input", x_input, "Preorder code text or marked-tree JSON")->required();
  exp->add_option("--d", x_d, "Arity for a root-only code");

  // heights
  auto* hgt = app.add_subcommand("heights", "Height summary of independent chains (descriptive)");
  int h_d = 2;
  std::uint64_t h_n = 100, h_reps = 10, h_seed = 0;
  hgt->add_option("--d", h_d, "Arity")->required();
  hgt->add_option("--n", h_n, "Internal nodes")->required();
  hgt->add_option("--reps", h_reps, "Number of chains");
  auto* h_seed_opt = hgt->add_option("--seed", h_seed, "Seed (default: $DARY_SEED, else 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return Exit::ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << app.help();
    return Exit::usage;
  }

  try {
    if (grow->parsed()) {
      const auto seed = detail::effective_seed(g_seed_opt, g_seed, err);
      const auto fmt = parse_format(g_format);
      check_growth_size(g_d, g_n);
      GrowthState s(g_d, seed);
      s.tree.reserve(static_cast<std::size_t>(g_d) * g_n + 1);
      while (s.step < g_n) {
        grow_step(s);
        if (g_every > 0 && s.step % g_every == 0 && s.step < g_n) out << render(s.tree, fmt);
      }
      out << render(s.tree, fmt);
      if (g_counters) err << detail::counters_json(s.counters, s.step).dump() << "\n";
      return Exit::ok;
    }

    if (verify->parsed()) {
      Report rep;
      if (v_bij->parsed()) {
        for (std::uint64_t n = 0; n <= vb_max_n; ++n)
          check_guard(input_count(vb_d, n), v_unguarded, "verify bijection at n = " + std::to_string(n));
        std::vector<Report> parts;
        for (std::uint64_t n = 0; n <= vb_max_n; ++n) parts.push_back(verify_enlarge_bijection(vb_d, n, v_unguarded));
        rep = detail::merge_reports("bijection", {{"d", vb_d}, {"max_n", vb_max_n}}, parts);
      } else if (v_rot->parsed()) {
        std::vector<Report> parts;
        for (std::size_t m = 1; m <= vr_m; ++m) parts.push_back(verify_rotation_lemma(m, vr_inc));
        rep = detail::merge_reports("rotation", {{"m", vr_m}, {"max_increment", vr_inc}}, parts);
      } else if (v_var->parsed()) {
        for (std::uint64_t n = 0; n <= vv_max_n; ++n)
          check_guard(input_count(2, n), v_unguarded, "verify variants at n = " + std::to_string(n));
        std::vector<Report> parts;
        for (std::uint64_t n = 0; n <= vv_max_n; ++n) parts.push_back(verify_binary_variants(n, v_unguarded));
        rep = detail::merge_reports("variants", {{"max_n", vv_max_n}}, parts);
      } else {
        rep.check = "counts";
        rep.params = {{"d", vc_d}, {"n", vc_n}};
        const auto count = count_trees(vc_d, vc_n);
        rep.counts["count"] = count.str();
        auto [lhs, rhs] = growth_identity_sides(vc_d, vc_n);
        rep.counts["identity_lhs"] = lhs.str();
        rep.counts["identity_rhs"] = rhs.str();
        if (lhs != rhs) rep.fail({{"reason", "size identity fails"}});
        if (v_unguarded || count <= BigCount(kEnumerationGuard)) {
          const auto listed = enumerate_trees(vc_d, vc_n, v_unguarded).size();
          rep.counts["enumerated"] = listed;
          if (BigCount(listed) != count) rep.fail({{"reason", "enumeration disagrees with the formula"}});
        }
      }
      out << rep.to_json().dump(2) << "\n";
      return rep.pass ? Exit::ok : Exit::check_failed;
    }

    if (uni->parsed()) {
      const auto seed = detail::effective_seed(u_seed_opt, u_seed, err);
      UniformityOptions opt;
      if (u_force != 0) opt.forced_letter = u_force;
      auto rep = chi_square_uniformity(u_d, u_n, u_samples, seed, opt);
      json j = rep.to_json();
      j["d"] = u_d;
      j["n"] = u_n;
      j["alpha"] = u_alpha;
      j["pass"] = rep.p_value >= u_alpha;
      out << j.dump(2) << "\n";
      return rep.p_value >= u_alpha ? Exit::ok : Exit::check_failed;
    }

    if (trace->parsed()) {
      auto x = edge_marked_from_json(detail::parse_json(detail::read_input(t_input)));
      if (t_d != 0 && x.tree.arity() != t_d)
        throw Error(Errc::arity_mismatch, "input has d = " + std::to_string(x.tree.arity()));
      json frames = json::array();
      enlarge_composed(x, Letter{t_letter}, &frames);
      out << frames.dump(2) << "\n";
      return Exit::ok;
    }

    if (enl->parsed()) {
      auto x = edge_marked_from_json(detail::parse_json(detail::read_input(e_input)));
      out << to_json(enlarge(std::move(x), Letter{e_letter})).dump() << "\n";
      return Exit::ok;
    }

    if (red->parsed()) {
      json j = detail::parse_json(detail::read_input(r_input));
      if (j.is_array()) {
        if (j.empty() || !j.back().contains("tree")) throw Error(Errc::parse_error, "trace has no final tree frame");
        j = j.back().at("tree");
      }
      auto [x, a] = reduce(leaf_marked_from_json(j));
      out << json{{"marked", to_json(x)}, {"letter", a.value}}.dump() << "\n";
      return Exit::ok;
    }

    if (exp->parsed()) {
      auto t = parse_tree_text(detail::read_input(x_input), x_d);
      out << render(t, parse_format(x_format));
      return Exit::ok;
    }

    if (hgt->parsed()) {
      const auto seed = detail::effective_seed(h_seed_opt, h_seed, err);
      auto s = height_stats(h_d, h_n, h_reps, seed);
      json j = s.to_json();
      j["d"] = h_d;
      j["n"] = h_n;
      j["reps"] = h_reps;
      out << j.dump(2) << "\n";
      return Exit::ok;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return detail::exit_code_for(e.code());
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return Exit::check_failed;
  }
  return Exit::usage;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"dary"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace dary::cli
