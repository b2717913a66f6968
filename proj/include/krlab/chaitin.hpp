#pragma once

// Requirement lists, the uniform constant kappa, and the restricted computers W_s
// with their dispatcher W(p, <s,d>) = W_s(p, d), W_Λ = U.

#include "krlab/bitstring.hpp"
#include "krlab/complexity_table.hpp"
#include "krlab/halting_index.hpp"
#include "krlab/kraft.hpp"
#include "krlab/prefix_vm.hpp"
#include "krlab/simple_set.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace krlab {

/// A needed K_U(s | d) is Infinite under the current budgets.
class InfiniteComplexity : public std::runtime_error {
 public:
  InfiniteComplexity(BitString s, BitString d)
      : std::runtime_error("K_U(" + s.to_string() + " | " + d.to_string() + ") is infinite within the budgets"),
        s_(std::move(s)),
        d_(std::move(d)) {}

  const BitString& s() const noexcept { return s_; }
  const BitString& d() const noexcept { return d_; }

 private:
  BitString s_;
  BitString d_;
};

using InnerDataKey = std::pair<BitString, BitString>;  // (s, d)

/// Index records U(p, d) = <r, s> with s != Λ, r in the simple set and d in the simple set,
/// grouped by (s, d). Each group lists entry positions in canonical program order.
inline std::map<InnerDataKey, std::vector<std::size_t>> qualifying_records(const HaltingIndex& index,
                                                                           const SimpleSet& simple) {
  std::vector<char> output_ok(index.outputs().size());
  for (std::size_t i = 0; i < output_ok.size(); ++i) {
    const auto& o = index.outputs()[i];
    output_ok[i] = !o.s.empty() && simple.contains(o.s) && simple.contains(o.r);
  }
  std::map<InnerDataKey, std::vector<std::size_t>> groups;
  const auto& entries = index.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (!output_ok[e.output] || !simple.contains(index.data()[e.data])) continue;
    groups[{index.outputs()[e.output].s, index.data()[e.data]}].push_back(i);
  }
  return groups;
}

struct Requirement {
  BitString result;
  std::size_t length = 0;
  BitString source_program;

  bool operator==(const Requirement&) const = default;
};

struct RequirementList {
  BitString s;
  BitString d;
  std::size_t kappa = 0;
  std::vector<Requirement> items;

  std::vector<std::size_t> lengths() const {
    std::vector<std::size_t> out;
    out.reserve(items.size());
    for (const auto& it : items) out.push_back(it.length);
    return out;
  }
};

struct KappaBudget {
  std::size_t kappa = 1;
  std::map<InnerDataKey, std::size_t> per_pair;
};

namespace detail {

inline std::size_t inner_complexity(const ComplexityTable& ktable, const BitString& s, const BitString& d) {
  const Complexity ks = k(ktable, s, d);
  if (!ks) throw InfiniteComplexity(s, d);
  return *ks;
}

// Least kappa' with every |p| - K + kappa' >= 1 and the Kraft sum of those lengths <= 1.
inline std::size_t minimal_pair_kappa(std::span<const long long> offsets) {
  if (offsets.empty()) return 1;
  const long long lowest = *std::min_element(offsets.begin(), offsets.end());
  long long kappa = std::max(0LL, 1 - lowest);
  std::vector<std::size_t> lengths(offsets.size());
  for (;; ++kappa) {
    for (std::size_t i = 0; i < offsets.size(); ++i) lengths[i] = static_cast<std::size_t>(offsets[i] + kappa);
    if (satisfies_kraft(lengths)) return static_cast<std::size_t>(kappa);
  }
}

}  // namespace detail

/// Per-pair minimal feasible constants for all s in S \ {Λ}, d in S, and their maximum.
inline KappaBudget minimal_kappa(const HaltingIndex& index, const ComplexityTable& ktable, const SimpleSet& simple) {
  const auto groups = qualifying_records(index, simple);
  KappaBudget budget;
  std::size_t kappa = 0;
  for (const auto& s : simple.members) {
    if (s.empty()) continue;
    for (const auto& d : simple.members) {
      const std::size_t ks = detail::inner_complexity(ktable, s, d);
      std::vector<long long> offsets;
      if (auto it = groups.find({s, d}); it != groups.end()) {
        for (std::size_t i : it->second) {
          offsets.push_back(static_cast<long long>(index.programs()[index.entries()[i].program].size()) -
                            static_cast<long long>(ks));
        }
      }
      const std::size_t value = detail::minimal_pair_kappa(offsets);
      budget.per_pair.emplace(InnerDataKey{s, d}, value);
      kappa = std::max(kappa, value);
    }
  }
  budget.kappa = budget.per_pair.empty() ? 1 : kappa;
  return budget;
}

/// One requirement <r_k, |p_k| - K_U(s|d) + kappa> per qualifying record, in program order.
inline RequirementList build_requirements(const HaltingIndex& index, const ComplexityTable& ktable,
                                          const SimpleSet& simple, const BitString& s, const BitString& d,
                                          std::size_t kappa) {
  RequirementList list{s, d, kappa, {}};
  if (s.empty()) throw std::invalid_argument("requirement lists are built for s != Λ");
  const std::size_t ks = detail::inner_complexity(ktable, s, d);
  const auto sid = index.data_id(d);
  if (!sid) return list;
  for (const auto& e : index.entries()) {
    if (e.data != *sid) continue;
    const auto& o = index.outputs()[e.output];
    if (o.s != s || !simple.contains(o.r)) continue;
    const BitString& p = index.programs()[e.program];
    const long long length = static_cast<long long>(p.size()) - static_cast<long long>(ks) + static_cast<long long>(kappa);
    if (length < 1) throw KraftViolation("kappa too small for (" + s.to_string() + ", " + d.to_string() + ")");
    list.items.push_back({o.r, static_cast<std::size_t>(length), p});
  }
  return list;
}

/// W_s as a finite table: (codeword, d) -> result, with the source program of each codeword.
class RestrictedComputerTable {
 public:
  struct Row {
    BitString d;
    BitString codeword;
    BitString result;
    BitString source_program;

    bool operator==(const Row&) const = default;
  };

  RestrictedComputerTable() = default;
  explicit RestrictedComputerTable(BitString s) : s_(std::move(s)) {}

  const BitString& s() const noexcept { return s_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }

  void add(Row row) {
    const std::size_t at = rows_.size();
    if (!lookup_.try_emplace({row.codeword, row.d}, at).second) {
      throw KraftViolation("duplicate codeword " + row.codeword.to_string() + " for W_" + s_.to_string());
    }
    auto [it, inserted] = shortest_.try_emplace({row.result, row.d}, at);
    if (!inserted && row.codeword < rows_[it->second].codeword) it->second = at;
    rows_.push_back(std::move(row));
  }

  const Row* find(const BitString& codeword, const BitString& d) const {
    auto it = lookup_.find({codeword, d});
    return it == lookup_.end() ? nullptr : &rows_[it->second];
  }

  /// Canonically first shortest row producing result on d.
  const Row* shortest_row(const BitString& result, const BitString& d) const {
    auto it = shortest_.find({result, d});
    return it == shortest_.end() ? nullptr : &rows_[it->second];
  }

  Complexity shortest(const BitString& result, const BitString& d) const {
    if (const Row* r = shortest_row(result, d)) return r->codeword.size();
    return std::nullopt;
  }

  std::vector<BitString> codewords_for(const BitString& d) const {
    std::vector<BitString> out;
    for (const auto& r : rows_) {
      if (r.d == d) out.push_back(r.codeword);
    }
    return out;
  }

 private:
  BitString s_;
  std::vector<Row> rows_;
  std::unordered_map<std::pair<BitString, BitString>, std::size_t, StringPairHash> lookup_;
  std::unordered_map<std::pair<BitString, BitString>, std::size_t, StringPairHash> shortest_;
};

/// Builds W_s: for each d in the simple set, canonical codewords for the requirement list,
/// with codeword i carrying the result and source program of requirement i.
inline RestrictedComputerTable build_Ws(const HaltingIndex& index, const ComplexityTable& ktable, const BitString& s,
                                        const SimpleSet& simple, std::size_t kappa) {
  RestrictedComputerTable table(s);
  for (const auto& d : simple.members) {
    const RequirementList list = build_requirements(index, ktable, simple, s, d, kappa);
    const auto lengths = list.lengths();
    const auto codewords = assign_codewords(lengths);
    for (std::size_t i = 0; i < list.items.size(); ++i) {
      table.add({d, codewords[i], list.items[i].result, list.items[i].source_program});
    }
  }
  return table;
}

/// The dispatcher over {W_s}. W_Λ is U itself: evaluated by running the VM, and its
/// complexities read from the base K table.
struct WComputer {
  TableParams params;
  SimpleSet simple;
  std::size_t kappa = 1;
  std::map<BitString, RestrictedComputerTable> family;
  std::shared_ptr<const ComplexityTable> base;
};

inline WComputer build_W(const HaltingIndex& index, std::shared_ptr<const ComplexityTable> ktable,
                         const SimpleSet& simple, std::size_t kappa) {
  WComputer w{index.params(), simple, kappa, {}, ktable};
  for (const auto& s : simple.members) {
    if (s.empty()) continue;
    w.family.emplace(s, build_Ws(index, *ktable, s, simple, kappa));
  }
  return w;
}

inline RunOutcome eval_W(const WComputer& w, const BitString& p, const BitString& data, std::uint64_t steps) {
  auto [s, d] = unpair(data);
  if (s.empty()) return run(p, d, steps);
  if (!w.simple.contains(s)) return Undefined::UnknownComputer;
  auto it = w.family.find(s);
  if (it == w.family.end()) return Undefined::UnknownComputer;
  if (const auto* row = it->second.find(p, d)) return row->result;
  return Undefined::NoSuchProgram;
}

}  // namespace krlab

namespace krlab {

/// Structural checks on a W family: per-(s, d) prefix-freeness and Kraft, the length law
/// |codeword| = |source| - K_U(s|d) + kappa, and validity of each source program on U.
/// Returns a description of every violation found; empty means the family is sound.
inline std::vector<std::string> audit_W(const WComputer& w, const ComplexityTable& ktable) {
  std::vector<std::string> problems;
  for (const auto& [s, table] : w.family) {
    std::map<BitString, std::vector<BitString>> by_data;
    for (const auto& row : table.rows()) {
      by_data[row.d].push_back(row.codeword);
      const Complexity ks = k(ktable, s, row.d);
      const std::string where = "s=" + s.to_string() + " d=" + row.d.to_string() + " codeword=" + row.codeword.to_string();
      if (!ks) {
        problems.push_back(where + ": K_U(s|d) is infinite");
        continue;
      }
      const long long expected = static_cast<long long>(row.source_program.size()) - static_cast<long long>(*ks) +
                                 static_cast<long long>(w.kappa);
      if (static_cast<long long>(row.codeword.size()) != expected) {
        problems.push_back(where + ": length " + std::to_string(row.codeword.size()) + " != " + std::to_string(expected));
      }
      const RunOutcome out = run(row.source_program, row.d, w.params.steps);
      if (!out.defined() || out.output() != pair(row.result, s)) {
        problems.push_back(where + ": source program does not print <r, s>");
      }
    }
    for (const auto& [d, words] : by_data) {
      std::vector<std::size_t> lengths;
      for (const auto& c : words) lengths.push_back(c.size());
      if (!satisfies_kraft(lengths)) problems.push_back("s=" + s.to_string() + " d=" + d.to_string() + ": Kraft sum > 1");
      if (!is_prefix_free(words)) problems.push_back("s=" + s.to_string() + " d=" + d.to_string() + ": not prefix-free");
    }
  }
  return problems;
}

}  // namespace krlab
