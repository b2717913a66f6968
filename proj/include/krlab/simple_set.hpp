#pragma once

#include "krlab/bitstring.hpp"

#include <cstddef>
#include <vector>

namespace krlab {

/// A delta-simple set realized as all strings of length <= uniform_max_len.
///
/// Members and the pair of any two members are shorter than delta. `members` is kept
/// in canonical (length-lexicographic) order, so members[i] == string_of(i).
struct SimpleSet {
  std::size_t delta = 0;
  std::vector<BitString> members;
  std::size_t uniform_max_len = 0;

  bool contains(const BitString& x) const { return !members.empty() && x.size() <= uniform_max_len; }
  std::size_t size() const { return members.size(); }
};

inline std::vector<BitString> strings_up_to_length(std::size_t max_len) {
  std::vector<BitString> out;
  const std::uint64_t count = (std::uint64_t{1} << (max_len + 1)) - 1;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(string_of(i));
  return out;
}

namespace detail {

inline bool is_simple_at(std::size_t delta, const std::vector<BitString>& candidates) {
  for (const auto& x : candidates) {
    if (x.size() >= delta) return false;
    for (const auto& y : candidates) {
      if (pair(x, y).size() >= delta) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Largest length-uniform delta-simple set. Empty when delta == 0.
inline SimpleSet build_simple_set(std::size_t delta) {
  SimpleSet out;
  out.delta = delta;
  if (delta == 0) return out;
  // The pair of two members of length m has length at least 2m, so m < delta/2 bounds the search.
  std::size_t m = 0;
  std::vector<BitString> best;
  for (;;) {
    auto candidates = strings_up_to_length(m);
    if (!detail::is_simple_at(delta, candidates)) break;
    best = std::move(candidates);
    out.uniform_max_len = m;
    ++m;
  }
  out.members = std::move(best);
  return out;
}

}  // namespace krlab
