#pragma once

#include "krlab/bitstring.hpp"
#include "krlab/halting_index.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace krlab {

/// A complexity in bits. std::nullopt means Infinite: no program within the budgets.
using Complexity = std::optional<std::size_t>;

struct KEntry {
  std::size_t k = 0;
  BitString witness;

  bool operator==(const KEntry&) const = default;
};

struct StringPairHash {
  std::size_t operator()(const std::pair<BitString, BitString>& p) const noexcept {
    const std::size_t a = std::hash<BitString>{}(p.first);
    const std::size_t b = std::hash<BitString>{}(p.second);
    return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  }
};

/// Exact K_U(x | d) with its canonically first shortest program, for every (x, d) in an index.
class ComplexityTable {
 public:
  using Key = std::pair<BitString, BitString>;  // (output, data)

  ComplexityTable() = default;
  explicit ComplexityTable(TableParams params) : params_(std::move(params)) {}

  const TableParams& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return entries_.size(); }

  const KEntry* find(const BitString& x, const BitString& d) const {
    auto it = entries_.find(Key{x, d});
    return it == entries_.end() ? nullptr : &it->second;
  }

  /// Inserts unless an entry exists; returns false if one did.
  bool insert(BitString x, BitString d, KEntry entry) {
    return entries_.try_emplace(Key{std::move(x), std::move(d)}, std::move(entry)).second;
  }

  /// Entries sorted by (x, d), both length-lexicographic.
  std::vector<std::pair<Key, KEntry>> sorted() const {
    std::vector<std::pair<Key, KEntry>> rows(entries_.begin(), entries_.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return rows;
  }

  template <class F>
  void for_each(F&& f) const {
    for (const auto& [key, entry] : entries_) f(key.first, key.second, entry);
  }

 private:
  TableParams params_;
  std::unordered_map<Key, KEntry, StringPairHash> entries_;
};

/// Minimum program length per (output, data). Records arrive in canonical program order,
/// so the first record seen for a key is the shortest, lexicographically least witness.
inline ComplexityTable build_k_table(const HaltingIndex& index) {
  ComplexityTable table(index.params());
  std::unordered_map<std::uint64_t, std::uint32_t> first;  // (output, data) -> program
  first.reserve(index.size() / 4);
  for (const auto& e : index.entries()) {
    const std::uint64_t key = (std::uint64_t{e.output} << 32) | e.data;
    first.try_emplace(key, e.program);
  }
  for (const auto& [key, program] : first) {
    const auto output = static_cast<std::uint32_t>(key >> 32);
    const auto data = static_cast<std::uint32_t>(key & 0xffffffffU);
    const BitString& witness = index.programs()[program];
    table.insert(index.outputs()[output].z, index.data()[data], KEntry{witness.size(), witness});
  }
  return table;
}

inline Complexity k(const ComplexityTable& table, const BitString& x, const BitString& d) {
  if (const KEntry* e = table.find(x, d)) return e->k;
  return std::nullopt;
}

inline Complexity k_joint(const ComplexityTable& table, const BitString& x, const BitString& y, const BitString& d) {
  return k(table, pair(x, y), d);
}

/// Defect of the unrestricted chain rule: K(<a,g>|b) - K(a|<g,b>) - K(g|b).
struct ChainDefect {
  BitString alpha;
  BitString gamma;
  BitString beta;
  long long delta_value = 0;

  bool operator==(const ChainDefect&) const = default;
};

inline std::optional<ChainDefect> chain_defect(const ComplexityTable& table, const BitString& alpha,
                                               const BitString& gamma, const BitString& beta) {
  const Complexity joint = k_joint(table, alpha, gamma, beta);
  const Complexity cond = k(table, alpha, pair(gamma, beta));
  const Complexity inner = k(table, gamma, beta);
  if (!joint || !cond || !inner) return std::nullopt;
  const auto value = static_cast<long long>(*joint) - static_cast<long long>(*cond) - static_cast<long long>(*inner);
  return ChainDefect{alpha, gamma, beta, value};
}

}  // namespace krlab
