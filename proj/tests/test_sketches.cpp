#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "viewsize/sketches.hpp"

using namespace viewsize;

namespace {

struct Item {
  std::string key;
  HashValue hash;
};

/// n distinct single-dimension rows "0", "1", ...
FactTable distinct_table(std::size_t n, std::size_t copies = 1) {
  std::vector<std::string> cells;
  cells.reserve(n * copies);
  for (std::size_t c = 0; c < copies; ++c)
    for (std::size_t i = 0; i < n; ++i) cells.push_back(std::to_string(i));
  return FactTable::from_cells(Schema::generated(1), std::move(cells));
}

template <class Sketch>
double estimate_of(std::size_t budget, const std::vector<Item>& items) {
  Sketch s(budget);
  for (const auto& it : items) s.add(it.key, it.hash);
  return s.estimate();
}

std::vector<Item> random_items(std::mt19937_64& rng, std::size_t n) {
  std::vector<Item> items;
  for (std::size_t i = 0; i < n; ++i)
    items.push_back({"t" + std::to_string(i), static_cast<HashValue>(rng())});
  return items;
}

}  // namespace

// ----------------------------------------------------------------- pc

TEST(PcSketch, HandTraceOfOneAdd) {
  PcSketch s(2);
  s.add(0b0110);  // row 0, (y >> 1) = 0b011 -> column 0
  EXPECT_EQ(s.bitmap()[0], 1u);
  EXPECT_EQ(s.bitmap()[1], 0u);
  s.add(0b0110);
  EXPECT_EQ(s.bitmap()[0], 1u);
}

TEST(PcSketch, AllZeroWordWithSingleRowIsClamped) {
  PcSketch s(1);
  s.add(0);
  EXPECT_EQ(s.bitmap()[0], 0x80000000u);
  EXPECT_EQ(s.bit_count(), 32u);
}

TEST(PcSketch, EmptyEstimate) {
  EXPECT_NEAR(PcSketch(64).estimate(), 64 / 0.77351, 1e-9);
  EXPECT_NEAR(PcSketch(64).estimate(), 82.74, 0.005);
}

TEST(PcSketch, TwoRowsWithTwoBitsEach) {
  PcSketch s(2);
  s.add(0b010);  // row 0, column 0
  s.add(0b100);  // row 0, column 1
  s.add(0b011);  // row 1, column 0
  s.add(0b101);  // row 1, column 1
  EXPECT_EQ(s.zero_position_sum(), 4u);
  EXPECT_NEAR(s.estimate(), 2 / 0.77351 * 4, 1e-12);
  EXPECT_NEAR(s.estimate(), 10.34, 0.005);
}

TEST(PcSketch, RejectsNonPowerOfTwo) {
  EXPECT_THROW(PcSketch(0), std::invalid_argument);
  EXPECT_THROW(PcSketch(48), std::invalid_argument);
}

// ------------------------------------------------------------- loglog

TEST(LogLogSketch, AlphaAt256) {
  EXPECT_NEAR(LogLogSketch::alpha(256), 0.395365, 5e-7);
}

TEST(LogLogSketch, EmptyEstimateIsAlphaTimesM) {
  LogLogSketch s(256);
  EXPECT_DOUBLE_EQ(s.estimate(), LogLogSketch::alpha(256) * 256);
}

TEST(LogLogSketch, TopBitsSelectRegister) {
  LogLogSketch s(4);
  s.add(0xC0000004u);  // bucket 0b11, low bits ...100
  EXPECT_EQ(s.registers()[3], 3);
  EXPECT_EQ(s.registers()[0], 0);
  s.add(0xC0000004u);
  EXPECT_EQ(s.registers()[3], 3);
}

TEST(LogLogSketch, RegistersKeepRunningMax) {
  LogLogSketch s(2);
  std::vector<std::uint8_t> expected(2, 0);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const auto y = static_cast<HashValue>(rng()) >> (i % 20);
    s.add(y);
    const std::size_t j = y >> 31;
    expected[j] = std::max<std::uint8_t>(expected[j], first_one_from_one(y, 31));
    EXPECT_EQ(s.registers(), expected);
  }
}

TEST(LogLogSketch, RegisterCeiling) {
  LogLogSketch s(8);
  s.add(0);
  s.add(0xE0000000u);
  EXPECT_EQ(s.registers()[0], 32 - 3 + 1);
  EXPECT_EQ(s.registers()[7], 32 - 3 + 1);
}

// ----------------------------------------------------------------- gt

TEST(GtSketch, ExactBelowCapacity) {
  std::mt19937_64 rng(1);
  GtSketch s(256);
  auto items = random_items(rng, 100);
  for (const auto& it : items) s.add(it.key, it.hash);
  for (const auto& it : items) s.add(it.key, it.hash);
  EXPECT_EQ(s.level(), 0u);
  EXPECT_EQ(s.size(), 100u);
  EXPECT_EQ(s.estimate(), 100.0);
}

TEST(GtSketch, CapacityOneWithTwoLevelZeroTuples) {
  GtSketch s(1);
  s.add("a", 0b1);
  EXPECT_EQ(s.estimate(), 1.0);
  s.add("b", 0b11);
  EXPECT_EQ(s.level(), 1u);
  EXPECT_EQ(s.size(), 0u);
  EXPECT_EQ(s.estimate(), 0.0);
}

TEST(GtSketch, EmptyStream) { EXPECT_EQ(GtSketch(8).estimate(), 0.0); }

TEST(GtSketch, EstimateIsPowerOfLevelTimesSize) {
  std::mt19937_64 rng(8);
  GtSketch s(50);
  for (const auto& it : random_items(rng, 5000)) {
    s.add(it.key, it.hash);
    ASSERT_LE(s.size(), 50u);
    ASSERT_GE(s.min_stored_level() , s.level());
    ASSERT_EQ(s.estimate(), std::ldexp(double(s.size()), int(s.level())));
  }
  EXPECT_GT(s.level(), 0u);
  EXPECT_EQ(std::ldexp(50.0, 3), 400.0);
}

TEST(GtSketch, AcceptsTuples) {
  GtSketch s(4);
  s.add(Tuple{{"x", "y"}}, 1);
  s.add(Tuple{{"x", "y"}}, 1);
  EXPECT_EQ(s.size(), 1u);
}

// ------------------------------------------------------ stream properties

// All three estimates are invariant under every permutation of small streams.
TEST(SketchProperties, PermutationInvariantByBruteForce) {
  std::mt19937_64 rng(99);
  for (int instance = 0; instance < 6; ++instance) {
    auto items = random_items(rng, 8);
    // Skew toward low positions so gt prunes several times at M = 3.
    for (auto& it : items) it.hash &= static_cast<HashValue>(rng()) | 0xFFFFFFF0u;
    std::vector<int> order(items.size());
    std::iota(order.begin(), order.end(), 0);
    auto run = [&](auto tag, std::size_t budget) {
      using Sketch = decltype(tag);
      std::vector<Item> perm;
      for (int i : order) perm.push_back(items[i]);
      return estimate_of<Sketch>(budget, perm);
    };
    const double pc0 = run(PcSketch(1), 4), ll0 = run(LogLogSketch(1), 4), gt0 = run(GtSketch(1), 3);
    std::size_t perms = 0;
    do {
      ASSERT_EQ(run(PcSketch(1), 4), pc0);
      ASSERT_EQ(run(LogLogSketch(1), 4), ll0);
      ASSERT_EQ(run(GtSketch(1), 3), gt0);
      ++perms;
    } while (std::next_permutation(order.begin(), order.end()));
    EXPECT_EQ(perms, 40320u);
  }
}

TEST(SketchProperties, DuplicateInsensitive) {
  std::mt19937_64 rng(5);
  auto distinct = random_items(rng, 3000);
  std::vector<Item> stream;
  for (int i = 0; i < 12000; ++i) stream.push_back(distinct[rng() % distinct.size()]);
  std::vector<Item> dedup;
  {
    std::vector<bool> seen(distinct.size());
    for (const auto& it : stream) {
      const std::size_t i = std::stoul(it.key.substr(1));
      if (!seen[i]) dedup.push_back(it), seen[i] = true;
    }
  }
  EXPECT_EQ(estimate_of<PcSketch>(64, stream), estimate_of<PcSketch>(64, dedup));
  EXPECT_EQ(estimate_of<LogLogSketch>(64, stream), estimate_of<LogLogSketch>(64, dedup));
  EXPECT_EQ(estimate_of<GtSketch>(64, stream), estimate_of<GtSketch>(64, dedup));
}

TEST(SketchProperties, MemoryCeiling) {
  EXPECT_EQ(PcSketch(128).bit_count(), 128u * 32u);
  EXPECT_EQ(LogLogSketch(128).registers().size(), 128u);
}

// ------------------------------------------------------------ estimator

TEST(RunEstimator, EmptyTable) {
  FactTable empty = FactTable::from_cells(Schema::generated(2), {});
  TupleHasher h(GroupByQuery{0, 1}, 0);
  EXPECT_EQ(run_estimator(Method::gt, empty, h, 16).estimate, 0.0);
}

TEST(RunEstimator, SingleRepeatedTuple) {
  std::vector<std::string> cells;
  for (int i = 0; i < 1000; ++i) cells.insert(cells.end(), {"k", "v"});
  FactTable t = FactTable::from_cells(Schema::generated(2), std::move(cells));
  for (std::size_t m : {1, 2, 64}) {
    TupleHasher h(GroupByQuery{0, 1}, 3);
    EXPECT_EQ(run_estimator(Method::gt, t, h, m).estimate, 1.0);
  }
}

TEST(RunEstimator, Deterministic) {
  FactTable t = distinct_table(5000, 2);
  for (Method m : {Method::pc, Method::loglog, Method::gt})
    for (HashingMode mode : {HashingMode::xor_tables, HashingMode::ideal}) {
      TupleHasher a(GroupByQuery{0}, 17, mode), b(GroupByQuery{0}, 17, mode);
      EXPECT_EQ(run_estimator(m, t, a, 64).estimate, run_estimator(m, t, b, 64).estimate);
    }
  TupleHasher h(GroupByQuery{0}, 0);
  EXPECT_THROW(run_estimator(Method::multifractal, t, h, 64), std::invalid_argument);
  TupleHasher wide(GroupByQuery{1}, 0);
  EXPECT_THROW(run_estimator(Method::gt, t, wide, 64), std::out_of_range);
}

TEST(Method, Parse) {
  for (Method m : {Method::pc, Method::loglog, Method::gt, Method::multifractal})
    EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_THROW(parse_method("hll"), std::invalid_argument);
}

// ------------------------------------------------------------ accuracy

namespace {

std::vector<double> seeded_estimates(Method m, const FactTable& t, std::size_t budget, int seeds) {
  std::vector<double> out;
  for (int s = 0; s < seeds; ++s) {
    TupleHasher h(GroupByQuery{0}, static_cast<std::uint64_t>(s), HashingMode::ideal);
    out.push_back(run_estimator(m, t, h, budget).estimate);
  }
  return out;
}

}  // namespace

// Mean relative error over 30 seeds within 3 standard errors of zero.
TEST(Accuracy, PcMeanErrorNearZero) {
  const FactTable t = distinct_table(100000);
  const auto est = seeded_estimates(Method::pc, t, 256, 30);
  double mean = 0;
  for (double e : est) mean += (e - 1e5) / 1e5;
  mean /= 30;
  EXPECT_LE(std::fabs(mean), 3 * 0.78 / 16);
}

TEST(Accuracy, LogLogRmsError) {
  const FactTable t = distinct_table(100000);
  const auto est = seeded_estimates(Method::loglog, t, 256, 30);
  double sq = 0;
  for (double e : est) sq += std::pow((e - 1e5) / 1e5, 2);
  EXPECT_LE(std::sqrt(sq / 30), 2 * 1.3 / 16);
}

// Doubling the view size scales the mean estimate by a factor in [1.5, 2.5].
TEST(Accuracy, ScaleResponse) {
  const FactTable small = distinct_table(50000), large = distinct_table(100000);
  for (Method m : {Method::pc, Method::loglog}) {
    auto a = seeded_estimates(m, small, 256, 30), b = seeded_estimates(m, large, 256, 30);
    const double ratio = std::accumulate(b.begin(), b.end(), 0.0) / std::accumulate(a.begin(), a.end(), 0.0);
    EXPECT_GE(ratio, 1.5) << to_string(m);
    EXPECT_LE(ratio, 2.5) << to_string(m);
  }
}
