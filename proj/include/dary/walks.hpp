#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dary/error.hpp"

namespace dary {

/// Integer path s_0..s_m. Values are stored; increments are derived.
/// A Lukasiewicz walk has s_0 = 0, s_m = -1 and increments >= -1; the
/// queries below accept any path with at least one step.
class LukWalk {
 public:
  LukWalk() = default;
  explicit LukWalk(std::vector<std::int64_t> values) : values_(std::move(values)) {
    if (values_.size() < 2) throw Error(Errc::invalid_argument, "a walk needs at least one step");
  }

  static LukWalk from_increments(std::span<const std::int64_t> inc) {
    std::vector<std::int64_t> v{0};
    v.reserve(inc.size() + 1);
    for (auto x : inc) v.push_back(v.back() + x);
    return LukWalk(std::move(v));
  }

  /// Number of steps m.
  std::size_t length() const noexcept { return values_.empty() ? 0 : values_.size() - 1; }
  const std::vector<std::int64_t>& values() const noexcept { return values_; }
  std::int64_t operator[](std::size_t i) const { return values_.at(i); }

  std::vector<std::int64_t> increments() const {
    std::vector<std::int64_t> inc(length());
    for (std::size_t j = 0; j < inc.size(); ++j) inc[j] = values_[j + 1] - values_[j];
    return inc;
  }

  bool is_lukasiewicz() const {
    if (values_.size() < 2 || values_.front() != 0 || values_.back() != -1) return false;
    for (std::size_t j = 0; j + 1 < values_.size(); ++j)
      if (values_[j + 1] - values_[j] < -1) return false;
    return true;
  }

  friend bool operator==(const LukWalk&, const LukWalk&) = default;

 private:
  std::vector<std::int64_t> values_;
};

/// Cyclic shift of the increments: step i of the result is step (i+r) mod m.
inline LukWalk rot(const LukWalk& s, std::size_t r) {
  const std::size_t m = s.length();
  if (r >= m)
    throw Error(Errc::rotation_out_of_range,
                "rotation " + std::to_string(r) + " outside [0," + std::to_string(m) + ")");
  auto inc = s.increments();
  std::rotate(inc.begin(), inc.begin() + static_cast<std::ptrdiff_t>(r), inc.end());
  return LukWalk::from_increments(inc);
}

/// Non-negative before the last step and -1 at the end.
inline bool is_excursion(const LukWalk& s) {
  const auto& v = s.values();
  if (v.size() < 2 || v.back() != -1) return false;
  return std::all_of(v.begin(), v.end() - 1, [](std::int64_t x) { return x >= 0; });
}

/// Smallest index where the walk attains its minimum.
inline std::size_t first_argmin(const LukWalk& s) {
  const auto& v = s.values();
  return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

/// The unique r in [0,m) for which rot(s, r) is an excursion (for
/// Lukasiewicz walks).
inline std::size_t excursion_shift(const LukWalk& s) { return first_argmin(s) % s.length(); }

inline std::string to_string(const LukWalk& s) {
  std::string out;
  for (std::size_t i = 0; i < s.values().size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s.values()[i]);
  }
  return out;
}

inline LukWalk parse_walk(std::string_view text) {
  std::vector<std::int64_t> v;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    auto part = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    try {
      std::size_t used = 0;
      std::string tok(part);
      v.push_back(std::stoll(tok, &used));
      if (used != tok.size()) throw Error(Errc::parse_error, "bad walk value '" + tok + "'");
    } catch (const std::logic_error&) {
      throw Error(Errc::parse_error, "bad walk value '" + std::string(part) + "'");
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return LukWalk(std::move(v));
}

/// Calls fn(walk) for every Lukasiewicz walk of length m whose increments lie
/// in [-1, max_increment], in lexicographic order of increments.
template <typename Fn>
void for_each_bounded_walk(std::size_t m, std::int64_t max_increment, Fn&& fn) {
  if (m == 0) return;
  std::vector<std::int64_t> inc(m, -1);
  for (;;) {
    std::int64_t sum = 0;
    for (auto x : inc) sum += x;
    if (sum == -1) fn(LukWalk::from_increments(inc));
    std::size_t j = m;
    while (j > 0 && inc[j - 1] == max_increment) inc[--j] = -1;
    if (j == 0) return;
    ++inc[j - 1];
  }
}

}  // namespace dary
