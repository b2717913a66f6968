#pragma once

// Finite binary strings, the length-lexicographic string <-> natural number
// bijection, and the Cantor pairing of strings built on top of it.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace krlab {

using Natural = boost::multiprecision::cpp_int;

/// Thrown when text does not denote a bit string ('0'/'1' characters, or "^" for the empty string).
class MalformedBits : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A finite binary string. Leading zeros are significant; the empty string is written "^" in text form.
///
/// Ordering is length-lexicographic (shorter first, then lexicographic), which is the
/// same order as the StringIndex enumeration and the canonical program order.
class BitString {
 public:
  BitString() = default;

  /// Builds from a raw '0'/'1' sequence. An empty view yields the empty string.
  static BitString from_bits(std::string_view bits) {
    for (char c : bits) {
      if (c != '0' && c != '1') throw MalformedBits("not a bit string: '" + std::string(bits) + "'");
    }
    BitString out;
    out.bits_.assign(bits);
    return out;
  }

  /// Parses the serialized form: "^" for the empty string, otherwise '0'/'1' characters.
  static BitString parse(std::string_view token) {
    if (token == "^") return {};
    if (token.empty()) throw MalformedBits("empty token; the empty string is written '^'");
    return from_bits(token);
  }

  std::string to_string() const { return bits_.empty() ? std::string("^") : bits_; }
  const std::string& bits() const noexcept { return bits_; }

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i] == '1'; }

  void push_back(bool bit) { bits_.push_back(bit ? '1' : '0'); }
  void pop_back() { bits_.pop_back(); }
  void append(const BitString& other) { bits_ += other.bits_; }
  void reserve(std::size_t n) { bits_.reserve(n); }

  void flip() noexcept {
    for (char& c : bits_) c = c == '0' ? '1' : '0';
  }

  bool is_prefix_of(const BitString& other) const noexcept {
    return bits_.size() <= other.bits_.size() && other.bits_.compare(0, bits_.size(), bits_) == 0;
  }

  friend BitString operator+(BitString a, const BitString& b) {
    a.append(b);
    return a;
  }

  bool operator==(const BitString&) const = default;

  std::strong_ordering operator<=>(const BitString& other) const noexcept {
    if (auto c = bits_.size() <=> other.bits_.size(); c != 0) return c;
    const int r = bits_.compare(other.bits_);
    return r < 0 ? std::strong_ordering::less : r > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

 private:
  std::string bits_;
};

inline BitString operator""_bits(const char* s, std::size_t n) { return BitString::parse({s, n}); }

/// Position of a string in the enumeration Λ, 0, 1, 00, 01, 10, 11, 000, ...
struct StringIndex {
  Natural value;

  StringIndex() = default;
  explicit StringIndex(Natural n) : value(std::move(n)) {}

  bool operator==(const StringIndex&) const = default;
  auto operator<=>(const StringIndex& other) const {
    return value < other.value ? std::strong_ordering::less
         : value > other.value ? std::strong_ordering::greater
                               : std::strong_ordering::equal;
  }
};

namespace detail {

// Strings this short have indices that fit comfortably in 64 bits, and their
// Cantor pairs fit in 128 bits.
inline constexpr std::size_t kFastBits = 60;

inline std::uint64_t small_index(const BitString& x) {
  std::uint64_t v = 1;
  for (char c : x.bits()) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  return v - 1;
}

// Binary digits of n+1 without the leading one.
template <class N>
BitString string_from_successor(N m) {
  std::string rev;
  while (m > 1) {
    rev.push_back(static_cast<int>(m & 1) ? '1' : '0');
    m >>= 1;
  }
  return BitString::from_bits(std::string(rev.rbegin(), rev.rend()));
}

inline unsigned __int128 isqrt_u128(unsigned __int128 n) {
  if (n == 0) return 0;
  // Newton iteration from a power of two above the root.
  unsigned bits = 0;
  for (unsigned __int128 t = n; t != 0; t >>= 1) ++bits;
  unsigned __int128 x = static_cast<unsigned __int128>(1) << ((bits + 1) / 2);
  for (;;) {
    unsigned __int128 y = (x + n / x) / 2;
    if (y >= x) return x;
    x = y;
  }
}

template <class N, class Sqrt>
std::pair<N, N> cantor_inverse(const N& z, Sqrt isqrt) {
  // w = floor((sqrt(8z + 1) - 1) / 2) is the diagonal holding z.
  N w = (isqrt(8 * z + 1) - 1) / 2;
  N t = w * (w + 1) / 2;
  N b = z - t;
  N a = w - b;
  return {a, b};
}

}  // namespace detail

inline StringIndex index_of(const BitString& x) {
  if (x.size() <= detail::kFastBits) return StringIndex(Natural(detail::small_index(x)));
  Natural v = 1;
  for (char c : x.bits()) {
    v <<= 1;
    if (c == '1') v |= 1;
  }
  return StringIndex(v - 1);
}

inline BitString string_of(const StringIndex& n) {
  if (n.value < 0) throw std::domain_error("string index must be non-negative");
  if (n.value < (Natural(1) << detail::kFastBits)) {
    return detail::string_from_successor(static_cast<std::uint64_t>(n.value) + 1);
  }
  return detail::string_from_successor(Natural(n.value + 1));
}

inline BitString string_of(std::uint64_t n) { return string_of(StringIndex(Natural(n))); }

/// Cantor pairing on naturals: (a+b)(a+b+1)/2 + b.
inline Natural cantor(const Natural& a, const Natural& b) {
  Natural s = a + b;
  return s * (s + 1) / 2 + b;
}

inline std::pair<Natural, Natural> cantor_unpair(const Natural& z) {
  return detail::cantor_inverse(z, [](const Natural& n) { return Natural(boost::multiprecision::sqrt(n)); });
}

/// The fixed pairing bijection on strings: string_of(cantor(index_of(x), index_of(y))).
inline BitString pair(const BitString& x, const BitString& y) {
  if (x.size() <= detail::kFastBits && y.size() <= detail::kFastBits) {
    using u128 = unsigned __int128;
    const u128 a = detail::small_index(x);
    const u128 b = detail::small_index(y);
    const u128 s = a + b;
    const u128 z = s * (s + 1) / 2 + b;
    if (z < (static_cast<u128>(1) << 120)) return detail::string_from_successor(z + 1);
  }
  return string_of(StringIndex(cantor(index_of(x).value, index_of(y).value)));
}

/// Inverse of pair.
inline std::pair<BitString, BitString> unpair(const BitString& z) {
  if (z.size() <= detail::kFastBits) {
    using u128 = unsigned __int128;
    const u128 n = detail::small_index(z);
    auto [a, b] = detail::cantor_inverse<u128>(n, detail::isqrt_u128);
    return {detail::string_from_successor(a + 1), detail::string_from_successor(b + 1)};
  }
  auto [a, b] = cantor_unpair(index_of(z).value);
  return {string_of(StringIndex(std::move(a))), string_of(StringIndex(std::move(b)))};
}

/// Left fold of pair: <a1> = a1, <a1,...,ak> = pair(<a1,...,a(k-1)>, ak).
inline BitString tuple_encode(std::span<const BitString> parts) {
  if (parts.empty()) throw std::invalid_argument("tuple_encode needs at least one string");
  BitString acc = parts.front();
  for (const auto& p : parts.subspan(1)) acc = pair(acc, p);
  return acc;
}

inline BitString tuple_encode(std::initializer_list<BitString> parts) {
  return tuple_encode(std::span<const BitString>(parts.begin(), parts.size()));
}

}  // namespace krlab

template <>
struct std::hash<krlab::BitString> {
  std::size_t operator()(const krlab::BitString& b) const noexcept { return std::hash<std::string>{}(b.bits()); }
};
