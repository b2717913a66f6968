#pragma once

#include "krlab/bitstring.hpp"
#include "krlab/prefix_vm.hpp"
#include "krlab/simple_set.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace krlab {

/// Budgets and machine a table was computed under. Every persisted artifact carries these.
struct TableParams {
  MachineSpec machine;
  std::size_t max_len = 21;
  std::uint64_t steps = 10'000;
  std::size_t delta = 8;

  bool operator==(const TableParams&) const = default;
};

/// One halting computation U(p, d) = z with (r, s) = unpair(z).
struct HaltingRecord {
  BitString p;
  BitString d;
  BitString z;
  BitString r;
  BitString s;
};

/// All halting (program, data) runs within the budgets, in canonical (program, data) order.
///
/// Strings are interned: a record is three small ids into the program, data and output
/// pools. Output pools also cache the unpaired halves.
class HaltingIndex {
 public:
  struct Entry {
    std::uint32_t program;
    std::uint32_t data;
    std::uint32_t output;
  };
  struct Output {
    BitString z;
    BitString r;
    BitString s;
  };

  HaltingIndex() = default;
  HaltingIndex(TableParams params, std::vector<BitString> programs, std::vector<BitString> data)
      : params_(std::move(params)), programs_(std::move(programs)), data_(std::move(data)) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_ids_.emplace(data_[i], static_cast<std::uint32_t>(i));
  }

  const TableParams& params() const noexcept { return params_; }
  const std::vector<BitString>& programs() const noexcept { return programs_; }
  const std::vector<BitString>& data() const noexcept { return data_; }
  const std::vector<Output>& outputs() const noexcept { return outputs_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  HaltingRecord record(std::size_t i) const {
    const Entry& e = entries_.at(i);
    const Output& o = outputs_[e.output];
    return {programs_[e.program], data_[e.data], o.z, o.r, o.s};
  }

  std::optional<std::uint32_t> data_id(const BitString& d) const {
    auto it = data_ids_.find(d);
    if (it == data_ids_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::uint32_t> output_id(const BitString& z) const {
    auto it = output_ids_.find(z);
    if (it == output_ids_.end()) return std::nullopt;
    return it->second;
  }

  /// Appends a record. Callers must add records in canonical order.
  void add(std::uint32_t program, std::uint32_t data, BitString z) {
    auto [it, inserted] = output_ids_.try_emplace(z, static_cast<std::uint32_t>(outputs_.size()));
    if (inserted) {
      auto [r, s] = unpair(z);
      outputs_.push_back({std::move(z), std::move(r), std::move(s)});
    }
    entries_.push_back({program, data, it->second});
  }

 private:
  TableParams params_;
  std::vector<BitString> programs_;
  std::vector<BitString> data_;
  std::vector<Output> outputs_;
  std::vector<Entry> entries_;
  std::unordered_map<BitString, std::uint32_t> data_ids_;
  std::unordered_map<BitString, std::uint32_t> output_ids_;
};

/// Simple-set members plus every conditioning string pair(g, d) with g, d in the set.
/// pair(Λ, d) is among them. Sorted canonically, without duplicates.
inline std::vector<BitString> conditioning_data(const SimpleSet& simple) {
  std::vector<BitString> out = simple.members;
  for (const auto& g : simple.members) {
    for (const auto& d : simple.members) out.push_back(pair(g, d));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Smallest program length bound for which K_U is finite on every string the
/// theorem and defect survey ask about: 3 * (longest pair of members) + 3.
inline std::size_t guaranteed_max_len(const SimpleSet& simple) {
  std::size_t longest = 0;
  for (const auto& a : simple.members) {
    for (const auto& b : simple.members) longest = std::max(longest, pair(a, b).size());
  }
  return kOpcodeWidth * longest + kOpcodeWidth;
}

/// Runs every valid program of at most params.max_len bits on every data string.
/// Undefined runs are left out.
inline HaltingIndex build_index(const TableParams& params, std::vector<BitString> data_set) {
  if (params.max_len < kOpcodeWidth) throw std::invalid_argument("max_len must be at least one opcode wide");
  std::sort(data_set.begin(), data_set.end());
  data_set.erase(std::unique(data_set.begin(), data_set.end()), data_set.end());
  HaltingIndex index(params, enumerate(params.max_len), std::move(data_set));
  const auto& programs = index.programs();
  const auto& data = index.data();
  for (std::size_t p = 0; p < programs.size(); ++p) {
    const auto ops = decode(programs[p]);
    for (std::size_t d = 0; d < data.size(); ++d) {
      RunOutcome out = execute(*ops, data[d], params.steps);
      if (out.defined()) {
        index.add(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(d), out.output());
      }
    }
  }
  return index;
}

}  // namespace krlab
