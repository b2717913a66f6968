#include "krlab/complexity_table.hpp"
#include "krlab/halting_index.hpp"

#include "lab_world.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>

namespace krlab {
namespace {

using testing::default_world;

BitString bits(const std::string& s) { return BitString::from_bits(s); }

TableParams params_at(std::size_t max_len, std::uint64_t steps = 10'000) {
  TableParams p;
  p.max_len = max_len;
  p.steps = steps;
  return p;
}

TEST(BuildIndex, HaltOnlyAtThreeBits) {
  const HaltingIndex index = build_index(params_at(3), {BitString{}});
  ASSERT_EQ(index.size(), 1U);
  const HaltingRecord r = index.record(0);
  EXPECT_EQ(r.p, bits("111"));
  EXPECT_TRUE(r.z.empty());
  EXPECT_TRUE(r.r.empty());
  EXPECT_TRUE(r.s.empty());
}

TEST(BuildIndex, SixBitsOnDataElevenOmitsOnlyTheFault) {
  const HaltingIndex index = build_index(params_at(6), {bits("11")});
  EXPECT_EQ(index.programs().size(), 7U);
  ASSERT_EQ(index.size(), 6U);
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto r = index.record(i);
    EXPECT_NE(r.p, bits("100111"));
    const auto want = oracle::interpret(r.p.bits(), "11", 10'000);
    ASSERT_TRUE(want);
    EXPECT_EQ(r.z.bits(), *want);
    EXPECT_EQ(pair(r.r, r.s), r.z);
  }
}

TEST(BuildIndex, RejectsTooShortLimit) { EXPECT_THROW(build_index(params_at(2), {}), std::invalid_argument); }

TEST(BuildIndex, DefaultRecordsAreCanonicalAndReproduceOutputs) {
  const auto& index = default_world().index;
  EXPECT_EQ(index.programs().size(), 55987U);
  EXPECT_EQ(index.data().size(), conditioning_data(default_world().simple).size());
  const auto& entries = index.entries();
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const bool ordered = entries[i - 1].program < entries[i].program ||
                         (entries[i - 1].program == entries[i].program && entries[i - 1].data < entries[i].data);
    ASSERT_TRUE(ordered) << i;
  }
  std::mt19937_64 rng(5);
  for (int n = 0; n < 2000; ++n) {
    const HaltingRecord r = index.record(rng() % index.size());
    ASSERT_EQ(run(r.p, r.d, index.params().steps), RunOutcome(r.z));
    ASSERT_EQ(pair(r.r, r.s), r.z);
  }
}

TEST(ConditioningData, HoldsMembersAndPairs) {
  const SimpleSet s = build_simple_set(8);
  const auto data = conditioning_data(s);
  EXPECT_TRUE(std::is_sorted(data.begin(), data.end()));
  for (const auto& g : s.members) {
    for (const auto& d : s.members) EXPECT_TRUE(std::binary_search(data.begin(), data.end(), pair(g, d)));
  }
  EXPECT_EQ(guaranteed_max_len(s), 21U);
  EXPECT_EQ(guaranteed_max_len(build_simple_set(1)), 3U);
}

TEST(KTable, Examples) {
  const auto& table = *default_world().ktable;
  for (const auto& d : default_world().index.data()) {
    const KEntry* e = table.find(BitString{}, d);
    ASSERT_NE(e, nullptr);
    EXPECT_EQ(e->k, 3U);
    EXPECT_EQ(e->witness, bits("111"));
  }
  EXPECT_EQ(k(table, bits("11"), bits("11")), 6U);
  EXPECT_EQ(table.find(bits("11"), bits("11"))->witness, bits("010111"));
  // "0000" needs three body opcodes (APPEND0 APPEND0 DUP); two reach at most two bits from Λ.
  EXPECT_EQ(k(table, bits("00"), BitString{}), 9U);
  EXPECT_EQ(table.find(bits("00"), BitString{})->witness, bits("000000111"));
  EXPECT_EQ(run(bits("000011111"), {}, 100), RunOutcome(bits("00")));
  EXPECT_EQ(k(table, bits("0000"), BitString{}), 12U);
  EXPECT_EQ(table.find(bits("0000"), BitString{})->witness, bits("000000011111"));
  EXPECT_EQ(k(table, BitString{}, BitString{}), 3U);
  EXPECT_EQ(k(table, BitString::from_bits(std::string(50, '1')), bits("01")), std::nullopt);
}

// K values by scanning raw bit strings with the reference interpreter.
std::optional<std::size_t> brute_k(const std::string& x, const std::string& d, std::size_t max_len) {
  for (std::size_t len = 3; len <= max_len; len += 3) {
    for (const auto& p : oracle::all_bitstrings(len)) {
      if (oracle::interpret(p, d, 10'000) == x) return len;
    }
  }
  return std::nullopt;
}

TEST(KTable, MatchesBruteForceOnSmallStrings) {
  const auto& table = *default_world().ktable;
  for (const std::string x : {"", "0", "1", "00", "01", "10", "11", "000", "0101", "1111"}) {
    for (const std::string d : {"", "1", "01"}) {
      EXPECT_EQ(k(table, bits(x), bits(d)), brute_k(x, d, 15)) << x << " | " << d;
    }
  }
  // k_joint("0", "1", Λ) = K("001" | Λ), found by search over all strings of up to 15 bits.
  EXPECT_EQ(k_joint(table, bits("0"), bits("1"), BitString{}), brute_k("001", "", 15));
  EXPECT_EQ(k_joint(table, bits("0"), bits("1"), BitString{}), 12U);
  EXPECT_EQ(k_joint(table, BitString{}, BitString{}, bits("10")), 3U);
}

TEST(KTable, WitnessesReexecute) {
  const auto& table = *default_world().ktable;
  std::size_t checked = 0;
  table.for_each([&](const BitString& x, const BitString& d, const KEntry& e) {
    ASSERT_EQ(e.witness.size(), e.k);
    ASSERT_EQ(run(e.witness, d, table.params().steps), RunOutcome(x));
    ++checked;
  });
  EXPECT_EQ(checked, table.size());
}

TEST(KTable, WitnessIsCanonicallyFirst) {
  const auto& index = default_world().index;
  const auto& table = *default_world().ktable;
  std::map<std::pair<BitString, BitString>, BitString> first;
  for (std::size_t i = 0; i < index.size(); ++i) {
    const auto r = index.record(i);
    auto [it, inserted] = first.try_emplace({r.z, r.d}, r.p);
    if (!inserted && r.p < it->second) it->second = r.p;
  }
  ASSERT_EQ(first.size(), table.size());
  for (const auto& [key, p] : first) ASSERT_EQ(table.find(key.first, key.second)->witness, p);
}

TEST(KTable, LiteralCeiling) {
  const auto& table = *default_world().ktable;
  table.for_each([&](const BitString& x, const BitString&, const KEntry& e) {
    if (3 * x.size() + 3 <= table.params().max_len) {
        ASSERT_LE(e.k, 3 * x.size() + 3);
      }
  });
}

TEST(KTable, MonotoneInBudgets) {
  const SimpleSet simple = build_simple_set(8);
  const auto data = conditioning_data(simple);
  const ComplexityTable small = build_k_table(build_index(params_at(15), data));
  const ComplexityTable tight = build_k_table(build_index(params_at(21, 12), data));
  const auto& full = *default_world().ktable;
  for (const auto* t : {&small, &tight}) {
    t->for_each([&](const BitString& x, const BitString& d, const KEntry& e) {
      const Complexity wide = k(full, x, d);
      ASSERT_TRUE(wide);
      ASSERT_GE(e.k, *wide);
    });
  }
  EXPECT_LT(small.size(), full.size());
  EXPECT_LT(tight.size(), full.size());
}

TEST(ChainDefect, Examples) {
  const auto& table = *default_world().ktable;
  const auto lambda = chain_defect(table, {}, {}, {});
  ASSERT_TRUE(lambda);
  EXPECT_EQ(lambda->delta_value, -3);
  // Output far beyond anything 21-bit programs print from these data strings.
  EXPECT_FALSE(chain_defect(table, BitString::from_bits(std::string(40, '0')), bits("1"), {}));
  const auto d = chain_defect(table, bits("0"), bits("1"), bits("10"));
  ASSERT_TRUE(d);
  EXPECT_EQ(d->delta_value, static_cast<long long>(*k_joint(table, bits("0"), bits("1"), bits("10"))) -
                                static_cast<long long>(*k(table, bits("0"), pair(bits("1"), bits("10")))) -
                                static_cast<long long>(*k(table, bits("1"), bits("10"))));
}

}  // namespace
}  // namespace krlab
