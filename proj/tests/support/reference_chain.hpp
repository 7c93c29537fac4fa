#pragma once

// Straight-line reimplementation of the growth chain for cross-checking.
// Trees are lists of node words in creation order; every step relabels the
// words instead of relinking an arena. Shares no code with the library.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ref {

struct SplitMix {
  std::uint64_t s;
  std::uint64_t next() {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t k) {
    // threshold = floor(2^64 / k) * k, done in 128 bits
    const unsigned __int128 two64 = static_cast<unsigned __int128>(1) << 64;
    const unsigned __int128 threshold = (two64 / k) * k;
    for (;;) {
      const std::uint64_t x = next();
      if (static_cast<unsigned __int128>(x) < threshold) return x % k;
    }
  }
};

using Word = std::vector<int>;

inline bool is_prefix(const Word& p, const Word& w) {
  return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

struct Chain {
  int d;
  std::vector<Word> words;  // creation order
  std::size_t root = 0;
  SplitMix rng;

  Chain(int arity, std::uint64_t seed) : d(arity), words{Word{}}, rng{seed} {}

  void step() {
    const std::uint64_t edges = words.size() - 1;
    std::vector<std::uint64_t> ranks;
    while (ranks.size() < static_cast<std::size_t>(d - 1)) {
      const auto r = rng.below(edges + d - 1);
      if (std::find(ranks.begin(), ranks.end(), r) == ranks.end()) ranks.push_back(r);
    }
    const int a = 1 + static_cast<int>(rng.below(d));

    std::vector<Word> cut;  // marked edges by their child word
    std::vector<int> buds;
    for (auto r : ranks) {
      if (r < edges) {
        std::size_t idx = 0;
        for (std::size_t i = 0, seen = 0; i < words.size(); ++i) {
          if (i == root) continue;
          if (seen++ == r) { idx = i; break; }
        }
        cut.push_back(words[idx]);
      } else {
        buds.push_back(static_cast<int>(r - edges));
      }
    }
    std::sort(cut.begin(), cut.end(), std::greater<>());
    std::sort(buds.begin(), buds.end());

    std::vector<int> rem;
    for (int i = 0; i < d; ++i)
      if (std::find(buds.begin(), buds.end(), i) == buds.end()) rem.push_back(i);
    std::map<Word, int> position;  // cut word -> forest position
    for (const auto& u : cut) {
      position[u] = rem.back();
      rem.pop_back();
    }
    const int rest_position = rem.front();
    auto new_slot = [&](int pos) { return ((pos - a) % d + d) % d + 1; };

    // deepest cut word that is a prefix of w (strictly above when strict)
    auto owner = [&](const Word& w, bool strict) -> const Word* {
      const Word* best = nullptr;
      for (const auto& u : cut)
        if (is_prefix(u, w) && (!strict || u.size() < w.size()) && (!best || u.size() > best->size())) best = &u;
      return best;
    };
    auto relabel = [&](const Word& w, bool strict) {
      const Word* o = owner(w, strict);
      Word out{new_slot(o ? position[*o] : rest_position)};
      out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(o ? o->size() : 0), w.end());
      return out;
    };

    std::vector<Word> next;
    next.reserve(words.size() + d);
    for (const auto& w : words) next.push_back(relabel(w, false));
    for (const auto& u : cut) next.push_back(relabel(u, true));  // stub left at u
    for (int b : buds) next.push_back(Word{new_slot(b)});
    next.push_back(Word{});
    root = next.size() - 1;
    words = std::move(next);
  }

  std::string code() const {
    std::set<Word> all(words.begin(), words.end());
    std::string out;
    for (const auto& w : all) {
      Word first = w;
      first.push_back(1);
      if (!out.empty()) out += ' ';
      out += all.count(first) ? std::to_string(d) : "0";
    }
    return out;
  }
};

}  // namespace ref
