#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "dary/binary_variants.hpp"
#include "dary/bijections.hpp"
#include "dary/io.hpp"
#include "dary/marks.hpp"
#include "dary/sampler.hpp"
#include "dary/tree.hpp"
#include "dary/walks.hpp"

namespace dary {

using BigCount = boost::multiprecision::cpp_int;

inline std::string to_string(const BigCount& x) { return x.str(); }

inline BigCount binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigCount r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;  // exact: r is binom(n-k+i, i) here
  }
  return r;
}

/// |A_n^d| = binom(dn+1, n) / (dn+1).
inline BigCount count_trees(int arity, std::uint64_t n) {
  if (arity < 2) throw Error(Errc::invalid_arity, "arity must be >= 2");
  const std::uint64_t m = static_cast<std::uint64_t>(arity) * n + 1;
  BigCount b = binomial(m, n);
  if (b % m != 0) throw Error(Errc::corrupt_input, "non-integral tree count");
  return b / m;
}

/// Both sides of the size identity binom((d-1)(n+1)+1, d-1) a_{n+1} =
/// d binom(dn+d-1, d-1) a_n.
inline std::pair<BigCount, BigCount> growth_identity_sides(int arity, std::uint64_t n) {
  const std::uint64_t d = static_cast<std::uint64_t>(arity);
  BigCount lhs = binomial((d - 1) * (n + 1) + 1, d - 1) * count_trees(arity, n + 1);
  BigCount rhs = BigCount(d) * binomial(d * n + d - 1, d - 1) * count_trees(arity, n);
  return {lhs, rhs};
}

/// Number of leaf markings of one tree of size n+1: binom((d-1)(n+1)+1, d-1).
inline BigCount leaf_marking_count(int arity, std::uint64_t n_plus_1) {
  const std::uint64_t d = static_cast<std::uint64_t>(arity);
  return binomial((d - 1) * n_plus_1 + 1, d - 1);
}

inline constexpr std::uint64_t kEnumerationGuard = 10'000'000;

inline void check_guard(const BigCount& objects, bool unguarded, const std::string& what) {
  if (!unguarded && objects > BigCount(kEnumerationGuard))
    throw Error(Errc::size_guard, what + " would produce " + objects.str() + " objects (limit " +
                                      std::to_string(kEnumerationGuard) + ")");
}

namespace detail {

/// Preorder codes of all trees of sizes 0..n, built by root decomposition.
inline std::vector<std::vector<std::vector<int>>> codes_by_size(int arity, std::uint64_t n) {
  std::vector<std::vector<std::vector<int>>> by(n + 1);
  by[0] = {{0}};
  for (std::uint64_t size = 1; size <= n; ++size) {
    // distribute size-1 internal nodes over the d root subtrees
    std::vector<std::uint64_t> parts(static_cast<std::size_t>(arity), 0);
    auto emit = [&](auto&& self, std::size_t slot, std::uint64_t left, std::vector<int>& prefix) -> void {
      if (slot + 1 == parts.size()) {
        for (const auto& c : by[left]) {
          auto full = prefix;
          full.insert(full.end(), c.begin(), c.end());
          by[size].push_back(std::move(full));
        }
        return;
      }
      for (std::uint64_t k = 0; k <= left; ++k) {
        for (const auto& c : by[k]) {
          auto saved = prefix.size();
          prefix.insert(prefix.end(), c.begin(), c.end());
          self(self, slot + 1, left - k, prefix);
          prefix.resize(saved);
        }
      }
    };
    std::vector<int> prefix{arity};
    emit(emit, 0, size - 1, prefix);
  }
  return by;
}

/// All k-subsets of [0, n) in lexicographic order.
template <typename Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

/// Every tree of A_n^d once, in increasing lexicographic order of preorder
/// code.
inline std::vector<DaryTree> enumerate_trees(int arity, std::uint64_t n, bool unguarded = false) {
  check_guard(count_trees(arity, n), unguarded, "enumerate_trees");
  auto codes = std::move(detail::codes_by_size(arity, n)[n]);
  std::sort(codes.begin(), codes.end());
  std::vector<DaryTree> out;
  out.reserve(codes.size());
  for (const auto& c : codes) out.push_back(DaryTree::from_preorder_code(arity, c));
  return out;
}

/// Mark universe of a tree: edges (non-root nodes in preorder), then buds.
inline std::vector<MarkTarget> mark_universe(const DaryTree& t) {
  std::vector<MarkTarget> u;
  for (NodeId v : t.preorder())
    if (!t.is_root(v)) u.push_back(MarkTarget::edge(v));
  for (int b = 0; b + 1 < t.arity(); ++b) u.push_back(MarkTarget::bud(b));
  return u;
}

/// All (d-1)-marked versions of the tree.
inline std::vector<EdgeMarkedTree> enumerate_edge_markings(const DaryTree& t) {
  std::vector<EdgeMarkedTree> out;
  const auto universe = mark_universe(t);
  detail::for_each_combination(universe.size(), static_cast<std::size_t>(t.arity() - 1),
                               [&](const std::vector<std::size_t>& pick) {
                                 std::vector<MarkTarget> marks;
                                 for (auto i : pick) marks.push_back(universe[i]);
                                 EdgeMarkedTree x(t, std::move(marks));
                                 canonicalize(x);
                                 out.push_back(std::move(x));
                               });
  return out;
}

/// Every m-leaf-marked version of the tree.
inline std::vector<LeafMarkedTree> enumerate_leaf_markings(const DaryTree& t, std::size_t m) {
  std::vector<NodeId> leaves;
  for (NodeId v : t.preorder())
    if (t.is_leaf(v)) leaves.push_back(v);
  std::vector<LeafMarkedTree> out;
  detail::for_each_combination(leaves.size(), m, [&](const std::vector<std::size_t>& pick) {
    std::vector<NodeId> marks;
    for (auto i : pick) marks.push_back(leaves[i]);
    out.emplace_back(t, std::move(marks));
  });
  return out;
}

inline BigCount input_count(int arity, std::uint64_t n) {
  const std::uint64_t d = static_cast<std::uint64_t>(arity);
  return BigCount(d) * binomial(d * n + d - 1, d - 1) * count_trees(arity, n);
}

/// Every element of EA_n^d x [1,d] exactly once.
inline std::vector<EdgeMarkedAndLetter> enumerate_inputs(int arity, std::uint64_t n, bool unguarded = false) {
  check_guard(input_count(arity, n), unguarded, "enumerate_inputs");
  std::vector<EdgeMarkedAndLetter> out;
  for (const auto& t : enumerate_trees(arity, n, unguarded))
    for (auto& x : enumerate_edge_markings(t))
      for (int a = 1; a <= arity; ++a) out.push_back({x, Letter{a}});
  return out;
}

/// Every (d-1)-marked forest of d trees with n internal nodes in total.
inline std::vector<MarkedForest> enumerate_forests(int arity, std::uint64_t n) {
  const auto d = static_cast<std::size_t>(arity);
  auto codes = detail::codes_by_size(arity, n);
  std::vector<std::vector<std::vector<LeafMarkedTree>>> marked(n + 1);  // [size][marks]
  for (std::uint64_t s = 0; s <= n; ++s) {
    marked[s].resize(d);
    for (const auto& c : codes[s]) {
      DaryTree t = DaryTree::from_preorder_code(arity, c);
      for (std::size_t m = 0; m < d; ++m)
        for (auto& x : enumerate_leaf_markings(t, m)) marked[s][m].push_back(std::move(x));
    }
  }
  std::vector<MarkedForest> out;
  std::vector<const LeafMarkedTree*> pick(d);
  auto rec = [&](auto&& self, std::size_t pos, std::uint64_t size_left, std::size_t marks_left) -> void {
    if (pos == d) {
      if (size_left == 0 && marks_left == 0) {
        MarkedForest f;
        for (auto* p : pick) f.trees.push_back(*p);
        out.push_back(std::move(f));
      }
      return;
    }
    for (std::uint64_t s = 0; s <= size_left; ++s)
      for (std::size_t m = 0; m <= marks_left; ++m)
        for (const auto& x : marked[s][m]) {
          pick[pos] = &x;
          self(self, pos + 1, size_left - s, marks_left - m);
        }
  };
  rec(rec, 0, n, d - 1);
  return out;
}

// --- reports ---------------------------------------------------------------

/// Outcome of an oracle check: {check, params, pass, counterexample?, counts?}.
struct Report {
  std::string check;
  json params = json::object();
  bool pass = true;
  std::optional<json> counterexample;
  json counts = json::object();

  void fail(json witness) {
    if (pass) counterexample = std::move(witness);
    pass = false;
  }

  json to_json() const {
    json j{{"check", check}, {"params", params}, {"pass", pass}};
    if (counterexample) j["counterexample"] = *counterexample;
    if (!counts.empty()) j["counts"] = counts;
    return j;
  }
};

/// Exhaustively checks that enlarge is a bijection from EA_n^d x [1,d] onto
/// the (d-1)-leaf-marked trees of size n+1: injective, right image size,
/// constant multiplicity over underlying trees, reduce o enlarge = id, and
/// the cut stage always lands on excursion-type forests. The in-place
/// enlarge is also compared with the map-by-map composition on every input.
inline Report verify_enlarge_bijection(int arity, std::uint64_t n, bool unguarded = false) {
  Report r;
  r.check = "bijection";
  r.params = {{"d", arity}, {"n", n}};
  const auto inputs = enumerate_inputs(arity, n, unguarded);
  const BigCount per_tree = leaf_marking_count(arity, n + 1);
  const BigCount trees_next = count_trees(arity, n + 1);

  std::unordered_set<std::string> images;
  std::unordered_map<std::string, std::uint64_t> per_shape;
  std::uint64_t cut_excursions = 0;
  for (const auto& [x, a] : inputs) {
    auto [forest, letter] = cut(x, a);
    if (is_excursion_forest(forest))
      ++cut_excursions;
    else
      r.fail({{"reason", "cut image is not excursion type"}, {"input", to_json(x)}, {"letter", a.value}});

    LeafMarkedTree y = enlarge(x, a);
    LeafMarkedTree y2 = enlarge_composed(x, a);
    const auto key = canonical_key(y);
    if (key != canonical_key(y2))
      r.fail({{"reason", "in-place enlarge differs from the composition"},
              {"input", to_json(x)},
              {"letter", a.value},
              {"in_place", to_json(y)},
              {"composed", to_json(y2)}});
    if (!validate(y).empty() || y.mark_count() + 1 != static_cast<std::size_t>(arity) ||
        y.tree.internal_count() != n + 1)
      r.fail({{"reason", "image is not a (d-1)-leaf-marked tree of size n+1"}, {"image", to_json(y)}});
    if (!images.insert(key).second)
      r.fail({{"reason", "two inputs share an image"}, {"input", to_json(x)}, {"letter", a.value}});
    ++per_shape[canonical_code(y.tree)];

    auto back = reduce(y);
    if (!(back.marked == x) || back.letter != a)
      r.fail({{"reason", "reduce(enlarge(x, a)) != (x, a)"},
              {"input", to_json(x)},
              {"letter", a.value},
              {"reduced", to_json(back.marked)},
              {"reduced_letter", back.letter.value}});
  }

  const BigCount expected_images = per_tree * trees_next;
  if (BigCount(images.size()) != expected_images)
    r.fail({{"reason", "image count"}, {"found", images.size()}, {"expected", expected_images.str()}});
  if (BigCount(per_shape.size()) != trees_next)
    r.fail({{"reason", "not every tree of size n+1 is hit"}, {"hit", per_shape.size()}});
  for (const auto& [code, hits] : per_shape)
    if (BigCount(hits) != per_tree) {
      r.fail({{"reason", "non-constant multiplicity"}, {"tree", code}, {"hits", hits}});
      break;
    }
  if (BigCount(inputs.size()) != input_count(arity, n))
    r.fail({{"reason", "input enumeration size"}, {"found", inputs.size()}});

  r.counts = {{"inputs", inputs.size()},
              {"distinct_images", images.size()},
              {"expected_images", expected_images.str()},
              {"trees_hit", per_shape.size()},
              {"multiplicity", per_tree.str()},
              {"cut_excursions", cut_excursions}};
  return r;
}

/// Over all walks of length m with increments in [-1, max_increment]: each
/// rotation class has m distinct members and exactly one excursion, the
/// excursion is found by excursion_shift, and a(Rot_r(s)) = m - r for
/// excursions s.
inline Report verify_rotation_lemma(std::size_t m, std::int64_t max_increment) {
  Report r;
  r.check = "rotation";
  r.params = {{"m", m}, {"max_increment", max_increment}};
  if (m == 0) throw Error(Errc::invalid_argument, "m must be >= 1");
  if (max_increment < 0) throw Error(Errc::invalid_argument, "max_increment must be >= 0");
  check_guard(boost::multiprecision::pow(BigCount(max_increment + 2), static_cast<unsigned>(m)), false,
              "verify_rotation_lemma");
  std::uint64_t walks = 0, excursions = 0;
  for_each_bounded_walk(m, max_increment, [&](const LukWalk& s) {
    ++walks;
    std::set<std::vector<std::int64_t>> members;
    std::size_t exc = 0, exc_at = m;
    for (std::size_t k = 0; k < m; ++k) {
      auto t = rot(s, k);
      members.insert(t.values());
      if (is_excursion(t)) {
        ++exc;
        exc_at = k;
      }
    }
    if (members.size() != m) r.fail({{"reason", "rotation class has repeated members"}, {"walk", to_string(s)}});
    if (exc != 1) r.fail({{"reason", "rotation class without exactly one excursion"}, {"walk", to_string(s)}});
    if (exc == 1 && excursion_shift(s) != exc_at)
      r.fail({{"reason", "excursion_shift disagrees with brute force"}, {"walk", to_string(s)}});
    if (is_excursion(s)) {
      ++excursions;
      for (std::size_t k = 0; k < m; ++k)
        if (first_argmin(rot(s, k)) != m - k)
          r.fail({{"reason", "a(Rot_r(s)) != m - r"}, {"walk", to_string(s)}, {"r", k}});
    }
  });
  if (walks != m * excursions) r.fail({{"reason", "walk count is not m times the excursion count"}});
  r.counts = {{"walks", walks}, {"classes", walks / m}, {"excursions", excursions}};
  return r;
}

/// Image count of the growth step over all (t, e, a) with t in A_k^d,
/// keyed by the canonical code of the (unmarked) result.
inline std::map<std::string, std::uint64_t> pushforward_counts(int arity, std::uint64_t k, bool unguarded = false) {
  std::map<std::string, std::uint64_t> counts;
  for (auto& [x, a] : enumerate_inputs(arity, k, unguarded)) {
    auto y = detail::InPlaceEnlarge::run(std::move(x), a, nullptr);
    ++counts[canonical_code(y.tree)];
  }
  return counts;
}

/// Each tree of A_{k+1}^d receives the same mass from the uniform law on
/// (t_k, e, a).
inline Report verify_pushforward(int arity, std::uint64_t k, bool unguarded = false) {
  Report r;
  r.check = "pushforward";
  r.params = {{"d", arity}, {"k", k}};
  const auto counts = pushforward_counts(arity, k, unguarded);
  const BigCount expected = leaf_marking_count(arity, k + 1);
  if (BigCount(counts.size()) != count_trees(arity, k + 1))
    r.fail({{"reason", "not every tree is reached"}, {"reached", counts.size()}});
  for (const auto& [code, hits] : counts)
    if (BigCount(hits) != expected) {
      r.fail({{"reason", "unequal mass"}, {"tree", code}, {"hits", hits}, {"expected", expected.str()}});
      break;
    }
  r.counts = {{"trees", counts.size()}, {"mass_per_tree", expected.str()}};
  return r;
}

/// Remy's map and the third map are each injective over
/// EA_n^2 x {r, l} with image exactly LAA_{n+1}^{2,1}; also records an
/// (t, e) whose two images under Remy, the third map and enlarge form three
/// different pairs.
inline Report verify_binary_variants(std::uint64_t n, bool unguarded = false) {
  Report r;
  r.check = "variants";
  r.params = {{"n", n}};
  check_guard(input_count(2, n), unguarded, "verify_binary_variants");

  std::set<std::string> target;
  for (const auto& t : enumerate_trees(2, n + 1, unguarded))
    for (const auto& y : enumerate_leaf_markings(t, 1)) target.insert(canonical_key(y));

  std::set<std::string> remy_images, third_images;
  std::uint64_t inputs = 0;
  std::optional<json> witness;
  for (const auto& t : enumerate_trees(2, n, unguarded)) {
    for (const auto& x : enumerate_edge_markings(t)) {
      std::set<std::string> rp, tp, ep;
      for (auto a : {BinaryLetter::right, BinaryLetter::left}) {
        ++inputs;
        auto yr = remy_enlarge(x, a);
        auto yt = third_enlarge(x, a);
        for (const auto* y : {&yr, &yt})
          if (!validate(*y).empty() || y->mark_count() != 1 || !target.count(canonical_key(*y)))
            r.fail({{"reason", "image outside LAA_{n+1}^{2,1}"}, {"input", to_json(x)}, {"image", to_json(*y)}});
        if (!remy_images.insert(canonical_key(yr)).second)
          r.fail({{"reason", "remy_enlarge is not injective"}, {"input", to_json(x)}, {"letter", to_string(a)}});
        if (!third_images.insert(canonical_key(yt)).second)
          r.fail({{"reason", "third_enlarge is not injective"}, {"input", to_json(x)}, {"letter", to_string(a)}});
        rp.insert(canonical_key(yr));
        tp.insert(canonical_key(yt));
      }
      for (int a = 1; a <= 2; ++a) ep.insert(canonical_key(enlarge(x, Letter{a})));
      if (!witness && rp != tp && tp != ep && rp != ep) {
        json w{{"input", to_json(x)}};
        w["remy"] = json::array();
        w["third"] = json::array();
        w["enlarge"] = json::array();
        for (auto a : {BinaryLetter::right, BinaryLetter::left}) {
          w["remy"].push_back(to_json(remy_enlarge(x, a)));
          w["third"].push_back(to_json(third_enlarge(x, a)));
        }
        for (int a = 1; a <= 2; ++a) w["enlarge"].push_back(to_json(enlarge(x, Letter{a})));
        witness = std::move(w);
      }
    }
  }
  if (remy_images != target) r.fail({{"reason", "remy image differs from LAA_{n+1}^{2,1}"}});
  if (third_images != target) r.fail({{"reason", "third image differs from LAA_{n+1}^{2,1}"}});
  r.counts = {{"inputs", inputs},
              {"target", target.size()},
              {"remy_images", remy_images.size()},
              {"third_images", third_images.size()}};
  if (witness)
    r.counts["witness"] = *witness;
  else if (n >= 2)
    r.fail({{"reason", "no input separates the three maps"}});
  return r;
}

// --- statistics ------------------------------------------------------------

struct ChiSquareReport {
  std::size_t classes = 0;
  double statistic = 0;
  std::size_t dof = 0;
  double p_value = 1;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  json to_json() const {
    return json{{"classes", classes}, {"statistic", statistic}, {"dof", dof},
                {"p_value", p_value}, {"samples", samples},     {"seed", seed}};
  }
};

/// Upper tail of the chi-square distribution with dof degrees of freedom.
inline double chi_square_upper_tail(double statistic, std::size_t dof) {
  if (dof == 0) return 1.0;
  if (statistic <= 0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(dof) / 2.0, statistic / 2.0);
}

inline constexpr std::size_t kMaxChiSquareClasses = 1'000'000;

/// Options for chi_square_uniformity. forced_letter replaces the letter draw
/// and exists to check that a biased sampler is caught.
struct UniformityOptions {
  std::optional<int> forced_letter;
};

/// Sample i is grown from its own seed, the i-th output of a Prng seeded
/// with `seed`; trees are binned by preorder code.
inline ChiSquareReport chi_square_uniformity(int arity, std::uint64_t n, std::uint64_t samples, std::uint64_t seed,
                                             const UniformityOptions& opt = {}) {
  const BigCount classes_big = count_trees(arity, n);
  if (classes_big > BigCount(kMaxChiSquareClasses))
    throw Error(Errc::size_guard, "too many classes to tabulate: " + classes_big.str());
  const auto classes = static_cast<std::size_t>(classes_big);
  if (samples < 10 * classes)
    throw Error(Errc::underpowered, std::to_string(samples) + " samples for " + std::to_string(classes) +
                                        " classes; need at least 10 per class");

  std::unordered_map<std::string, std::size_t> bin;
  for (const auto& t : enumerate_trees(arity, n)) bin.emplace(canonical_code(t), bin.size());
  std::vector<std::uint64_t> observed(classes, 0);

  Prng seeds(seed);
  for (std::uint64_t i = 0; i < samples; ++i) {
    GrowthState s(arity, seeds.next());
    s.forced_letter = opt.forced_letter;
    while (s.step < n) grow_step(s);
    auto it = bin.find(canonical_code(s.tree));
    if (it == bin.end()) throw Error(Errc::corrupt_input, "sampled a tree outside A_n^d");
    ++observed[it->second];
  }

  ChiSquareReport rep;
  rep.classes = classes;
  rep.dof = classes - 1;
  rep.samples = samples;
  rep.seed = seed;
  const double expected = static_cast<double>(samples) / static_cast<double>(classes);
  for (auto o : observed) {
    const double diff = static_cast<double>(o) - expected;
    rep.statistic += diff * diff / expected;
  }
  rep.p_value = chi_square_upper_tail(rep.statistic, rep.dof);
  return rep;
}

struct HeightSummary {
  double mean = 0;
  double stddev = 0;
  std::size_t min = 0;
  std::size_t max = 0;

  json to_json() const { return json{{"mean", mean}, {"stddev", stddev}, {"min", min}, {"max", max}}; }
};

/// Heights of `reps` independent chains grown to size n. Descriptive only.
inline HeightSummary height_stats(int arity, std::uint64_t n, std::uint64_t reps, std::uint64_t seed) {
  if (reps == 0) throw Error(Errc::invalid_argument, "reps must be >= 1");
  Prng seeds(seed);
  std::vector<double> h;
  HeightSummary out;
  out.min = SIZE_MAX;
  for (std::uint64_t i = 0; i < reps; ++i) {
    auto t = grow_to(arity, n, seeds.next()).tree.height();
    h.push_back(static_cast<double>(t));
    out.min = std::min(out.min, t);
    out.max = std::max(out.max, t);
  }
  double sum = 0;
  for (double x : h) sum += x;
  out.mean = sum / static_cast<double>(h.size());
  double ss = 0;
  for (double x : h) ss += (x - out.mean) * (x - out.mean);
  out.stddev = h.size() > 1 ? std::sqrt(ss / static_cast<double>(h.size() - 1)) : 0.0;
  return out;
}

}  // namespace dary
