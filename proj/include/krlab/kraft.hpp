#pragma once

// Exact Kraft accounting and canonical prefix-code assignment.

#include "krlab/bitstring.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace krlab {

class KraftViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// sum 2^-l as numerator / 2^scale_bits, with scale_bits the largest length.
struct KraftSum {
  Natural numerator = 0;
  std::size_t scale_bits = 0;

  bool at_most_one() const { return numerator <= (Natural(1) << scale_bits); }
};

inline KraftSum kraft_sum(std::span<const std::size_t> lengths) {
  KraftSum sum;
  if (lengths.empty()) return sum;
  sum.scale_bits = *std::max_element(lengths.begin(), lengths.end());
  for (std::size_t l : lengths) sum.numerator += Natural(1) << (sum.scale_bits - l);
  return sum;
}

inline bool satisfies_kraft(std::span<const std::size_t> lengths) { return kraft_sum(lengths).at_most_one(); }

/// True when no element is a proper or improper prefix of another. Sorting puts any
/// prefix immediately before some string it prefixes, so adjacent checks suffice.
inline bool is_prefix_free(std::vector<BitString> words) {
  std::sort(words.begin(), words.end(), [](const BitString& a, const BitString& b) { return a.bits() < b.bits(); });
  for (std::size_t i = 1; i < words.size(); ++i) {
    if (words[i - 1].is_prefix_of(words[i])) return false;
  }
  return true;
}

namespace detail {

// Binary increment of a fixed-width counter; false on overflow.
inline bool increment(std::string& bits) {
  for (auto i = bits.size(); i-- > 0;) {
    if (bits[i] == '0') {
      bits[i] = '1';
      return true;
    }
    bits[i] = '0';
  }
  return false;
}

}  // namespace detail

/// Canonical code: visit lengths ascending (ties by position). The first codeword is all
/// zeros; each next one is the previous plus one, left-shifted to the new length.
/// Output is in input order, with |codeword[i]| == lengths[i].
inline std::vector<BitString> assign_codewords(std::span<const std::size_t> lengths) {
  if (std::find(lengths.begin(), lengths.end(), std::size_t{0}) != lengths.end()) {
    throw KraftViolation("codeword lengths must be at least 1");
  }
  if (!satisfies_kraft(lengths)) throw KraftViolation("requested lengths violate the Kraft inequality");

  std::vector<std::size_t> order(lengths.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lengths[a] < lengths[b]; });

  std::vector<BitString> out(lengths.size());
  std::string code;
  bool first = true;
  for (std::size_t i : order) {
    if (first) {
      code.assign(lengths[i], '0');
      first = false;
    } else {
      if (!detail::increment(code)) throw KraftViolation("canonical code overflow");
      code.resize(lengths[i], '0');
    }
    out[i] = BitString::from_bits(code);
  }
  return out;
}

}  // namespace krlab
