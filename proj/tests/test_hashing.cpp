#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "viewsize/hashing.hpp"

using namespace viewsize;

namespace {

/// Upper-tail p-value of a chi-square statistic (Wilson-Hilferty).
double chi_square_p_value(double stat, double df) {
  const double z = (std::cbrt(stat / df) - (1 - 2 / (9 * df))) / std::sqrt(2 / (9 * df));
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace

TEST(FirstOneBit, FromZero) {
  EXPECT_EQ(first_one_from_zero(0b1000, 32), 3u);
  EXPECT_EQ(first_one_from_zero(1, 32), 0u);
  EXPECT_EQ(first_one_from_zero(0, 32), 32u);
  EXPECT_EQ(first_one_from_zero(0x80000000u, 32), 31u);
  // Bits above the width are ignored.
  EXPECT_EQ(first_one_from_zero(0b1000, 3), 3u);
  EXPECT_EQ(first_one_from_zero(0b1000, 4), 3u);
}

TEST(FirstOneBit, FromOne) {
  EXPECT_EQ(first_one_from_one(0b1, 32), 1u);
  EXPECT_EQ(first_one_from_one(0b100, 32), 3u);
  EXPECT_EQ(first_one_from_one(0, 27), 28u);
  EXPECT_EQ(first_one_from_one(1u << 27, 27), 28u);
}

TEST(DimensionTable, MemoizesAndIsSeedDeterministic) {
  DimensionTable a(42), b(42), c(43);
  const HashValue x = a.hash("hour=13");
  EXPECT_EQ(a.hash("hour=13"), x);
  EXPECT_EQ(a.size(), 1u);

  // Same seed and insertion order reproduce every word.
  EXPECT_EQ(b.hash("hour=13"), x);
  EXPECT_EQ(a.hash("hour=14"), b.hash("hour=14"));

  // Words depend on insertion order, not on the value's bytes.
  DimensionTable d(42);
  EXPECT_EQ(d.hash("something else"), x);

  EXPECT_NE(c.hash("hour=13"), x);
}

TEST(DimensionTable, FrozenTableRejectsNewValues) {
  DimensionTable t(1);
  const HashValue w = t.hash("a");
  t.freeze();
  EXPECT_EQ(t.hash("a"), w);
  EXPECT_EQ(t.lookup("a"), w);
  EXPECT_FALSE(t.lookup("b").has_value());
  EXPECT_THROW(t.hash("b"), std::logic_error);
}

// Each output bit of 10^5 fresh values is set with frequency 0.5 +- 0.01
// (3 sigma of the binomial is 0.0047).
TEST(DimensionTable, OutputBitsAreUniform) {
  constexpr int n = 100000;
  DimensionTable t(2024);
  std::vector<int> ones(32, 0);
  for (int i = 0; i < n; ++i) {
    const HashValue w = t.hash(std::to_string(i));
    for (int b = 0; b < 32; ++b) ones[b] += (w >> b) & 1;
  }
  for (int b = 0; b < 32; ++b) EXPECT_NEAR(ones[b] / double(n), 0.5, 0.01) << "bit " << b;
}

TEST(TupleHasher, SingleDimensionMatchesTable) {
  const std::uint64_t seed = 9;
  TupleHasher h(GroupByQuery{3}, seed);
  DimensionTable t(dimension_seed(seed, 3));
  for (const char* v : {"a", "b", "c", "a"}) EXPECT_EQ(h.hash_tuple({{v}}), t.hash(v));
}

TEST(TupleHasher, XorOfDimensionWords) {
  EXPECT_EQ(HashValue{0x0000000F} ^ HashValue{0x000000F0}, HashValue{0x000000FF});

  const std::uint64_t seed = 77;
  TupleHasher h(GroupByQuery{0, 2}, seed);
  DimensionTable t0(dimension_seed(seed, 0)), t2(dimension_seed(seed, 2));
  for (auto [a, b] : std::vector<std::pair<std::string, std::string>>{{"x", "y"}, {"x", "z"}, {"w", "y"}}) {
    EXPECT_EQ(h.hash_tuple({{a, b}}), t0.hash(a) ^ t2.hash(b));
    const std::vector<std::string> row{a, "ignored", b};
    EXPECT_EQ(h.hash_row(row), t0.hash(a) ^ t2.hash(b));
  }
  EXPECT_THROW(h.hash_tuple({{"only-one"}}), std::invalid_argument);
}

TEST(TupleHasher, TablesAreSharedAcrossQueriesUnderOneSeed) {
  TupleHasher a(GroupByQuery{1}, 5), b(GroupByQuery{1, 4}, 5);
  DimensionTable t4(dimension_seed(5, 4));
  const HashValue w4 = t4.hash("v");
  EXPECT_EQ(a.hash_tuple({{"u"}}) ^ w4, b.hash_tuple({{"u", "v"}}));
}

TEST(TupleHasher, IdealModeMemoizesPerTuple) {
  TupleHasher h(GroupByQuery{0, 1}, 3, HashingMode::ideal);
  const HashValue ab = h.hash_tuple({{"a", "b"}});
  EXPECT_EQ(h.hash_tuple({{"a", "b"}}), ab);
  EXPECT_NE(h.hash_tuple({{"a", "c"}}), ab);
  EXPECT_EQ(h.memo_size(), 2u);

  std::string key;
  const std::vector<std::string> row{"a", "b"};
  projected_key(row, h.query(), key);
  EXPECT_EQ(h.hash_row(row, key), ab);

  TupleHasher again(GroupByQuery{0, 1}, 3, HashingMode::ideal);
  EXPECT_EQ(again.hash_tuple({{"a", "b"}}), ab);
}

// Brute-force collision scan: 10^4 distinct 2-dimension tuples have an
// expected 0.012 colliding pairs at 32 bits.
TEST(TupleHasher, NoCollisionsAmongDistinctTuples) {
  for (HashingMode mode : {HashingMode::xor_tables, HashingMode::ideal}) {
    TupleHasher h(GroupByQuery{0, 1}, 123, mode);
    std::unordered_set<HashValue> seen;
    for (int a = 0; a < 100; ++a)
      for (int b = 0; b < 100; ++b) seen.insert(h.hash_tuple({{std::to_string(a), std::to_string(b)}}));
    EXPECT_EQ(seen.size(), 10000u) << to_string(mode);
  }
}

// Three distinct tuples (a,b), (a',b), (a,b'): across seeds, the joint
// distribution of their low-order hash bits is uniform over 2^8 cells.
TEST(TupleHasher, ThreeTuplesLookIndependent) {
  constexpr int cells = 256, per_cell = 100;
  std::vector<int> counts(cells, 0);
  for (int seed = 0; seed < cells * per_cell; ++seed) {
    TupleHasher h(GroupByQuery{0, 1}, static_cast<std::uint64_t>(seed));
    const HashValue h1 = h.hash_tuple({{"a", "b"}});
    const HashValue h2 = h.hash_tuple({{"a2", "b"}});
    const HashValue h3 = h.hash_tuple({{"a", "b2"}});
    ++counts[(h1 & 7) | ((h2 & 7) << 3) | ((h3 & 3) << 6)];
  }
  double stat = 0;
  for (int c : counts) stat += (c - per_cell) * double(c - per_cell) / per_cell;
  EXPECT_GT(chi_square_p_value(stat, cells - 1), 0.001) << "chi2=" << stat;
}

// The XOR construction stops at 3-wise: the fourth corner of a rectangle is
// determined by the other three.
TEST(TupleHasher, FourTuplesAreDependent) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    TupleHasher h(GroupByQuery{0, 1}, seed);
    EXPECT_EQ(h.hash_tuple({{"a", "b"}}) ^ h.hash_tuple({{"a2", "b"}}) ^ h.hash_tuple({{"a", "b2"}}),
              h.hash_tuple({{"a2", "b2"}}));
  }
}

TEST(TupleHasher, MemoryGrowsWithDistinctAttributesOnly) {
  TupleHasher h(GroupByQuery{0, 1}, 1);
  for (int rep = 0; rep < 50; ++rep)
    for (int a = 0; a < 10; ++a)
      for (int b = 0; b < 7; ++b) h.hash_tuple({{std::to_string(a), std::to_string(b)}});
  EXPECT_EQ(h.memo_size(), 17u);
}

TEST(HashingMode, Parse) {
  EXPECT_EQ(parse_hashing_mode("ideal"), HashingMode::ideal);
  EXPECT_EQ(parse_hashing_mode("xor-tables"), HashingMode::xor_tables);
  EXPECT_THROW(parse_hashing_mode("md5"), std::invalid_argument);
}
