#pragma once

// Sample-based view-size estimation under a binary multifractal model.
//
// The model places 2^k leaves of a depth-k binary tree; a leaf reached by `a`
// right turns has mass p^(k-a) (1-p)^a. Given a sample, (k, p) is fitted to
// the sample's distinct count F0 and its heaviest tuple's share m_max/N', then
// the expected number of occupied leaves after N draws is the estimate.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "viewsize/hashing.hpp"
#include "viewsize/ingest.hpp"
#include "viewsize/sketches.hpp"

namespace viewsize {

struct SampleSummary {
  std::uint64_t total_rows = 0;     // N
  std::uint64_t sample_rows = 0;    // N'
  std::uint64_t sample_distinct = 0;  // F0 of the sample
  std::uint64_t max_multiplicity = 0;  // m_max

  void validate() const {
    if (sample_rows == 0 || sample_rows > total_rows)
      throw std::invalid_argument("sample size must be in [1, N]");
    if (max_multiplicity < 1 || max_multiplicity > sample_rows)
      throw std::invalid_argument("m_max must be in [1, N']");
    if (sample_distinct < 1 || sample_distinct > sample_rows)
      throw std::invalid_argument("sample distinct count must be in [1, N']");
  }

  friend bool operator==(const SampleSummary&, const SampleSummary&) = default;
};

/// corrected: sum C(k,a) (1 - (1 - q_a)^n), the leaf-occupancy expectation.
/// paper_literal: sum C(k,a) (1 - q_a^n), as printed in the original listing.
enum class FormulaVariant { corrected, paper_literal };

inline std::string_view to_string(FormulaVariant v) {
  return v == FormulaVariant::corrected ? "corrected" : "paper-literal";
}

inline FormulaVariant parse_formula_variant(std::string_view s) {
  if (s == "corrected") return FormulaVariant::corrected;
  if (s == "paper-literal" || s == "literal") return FormulaVariant::paper_literal;
  throw std::invalid_argument("unknown multifractal variant '" + std::string(s) + "'");
}

struct MultifractalModel {
  unsigned depth = 0;  // k
  double bias = 1.0;   // p, as last fitted on the sample
};

class MultifractalFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr unsigned kMaxModelDepth = 64;

namespace detail {

/// (1 - q)^n for q in [0, 1], n >= 1, without cancellation for tiny q.
inline long double complement_power(long double q, long double n) {
  if (q >= 1.0L) return 0.0L;
  return std::exp(n * std::log1p(-q));
}

/// q^n with 0^0 = 1.
inline long double power(long double q, long double n) {
  if (n == 0.0L) return 1.0L;
  return std::pow(q, n);
}

}  // namespace detail

/// Expected number of distinct leaves seen after n draws from the depth-k
/// model with bias p.
inline double expected_distinct(unsigned k, double p, double n,
                                FormulaVariant variant = FormulaVariant::corrected) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("bias must be in (0, 1]");
  const long double pl = p, ql = 1.0L - pl;
  const long double nl = n;
  long double sum = 0;
  long double binom = 1;  // C(k, a)
  for (unsigned a = 0; a <= k; ++a) {
    const long double mass = detail::power(pl, k - a) * detail::power(ql, a);
    const long double occupied = variant == FormulaVariant::corrected
                                     ? 1.0L - detail::complement_power(mass, nl)
                                     : 1.0L - detail::power(mass, nl);
    sum += binom * occupied;
    binom = binom * (k - a) / (a + 1);
  }
  return static_cast<double>(sum);
}

/// Fits (k, p) to a sample: starting at k = ceil(log2 F0), fit p to m_max/N'
/// and increase k until the model's expected distinct count reaches F0. As in
/// the original listing, k is incremented once more after the last fit.
inline MultifractalModel fit_model(const SampleSummary& s,
                                   FormulaVariant variant = FormulaVariant::corrected) {
  s.validate();
  const double f0 = static_cast<double>(s.sample_distinct);
  const double share = static_cast<double>(s.max_multiplicity) / static_cast<double>(s.sample_rows);
  auto k = static_cast<unsigned>(std::ceil(std::log2(f0)));
  double fitted = 0;
  double p = 1.0;
  while (fitted < f0) {
    if (k > kMaxModelDepth)
      throw MultifractalFitError("multifractal fit did not reach F0=" + std::to_string(s.sample_distinct) +
                                 " before depth " + std::to_string(kMaxModelDepth) +
                                 " (F0 exceeds what the skew m_max/N' allows)");
    p = k == 0 ? 1.0 : std::pow(share, 1.0 / k);
    fitted = expected_distinct(k, p, static_cast<double>(s.sample_rows), variant);
    ++k;
  }
  return {k, p};
}

/// Extrapolates to the full table: p is re-derived from m_max/N at the
/// model's depth.
inline double estimate_multifractal(const SampleSummary& s, const MultifractalModel& model,
                                    FormulaVariant variant = FormulaVariant::corrected) {
  const double share = static_cast<double>(s.max_multiplicity) / static_cast<double>(s.total_rows);
  const double p = model.depth == 0 ? 1.0 : std::pow(share, 1.0 / model.depth);
  return expected_distinct(model.depth, p, static_cast<double>(s.total_rows), variant);
}

/// Row indices of a uniform fixed-size sample without replacement, sorted.
/// Reservoir sampling with geometric skips (Li's Algorithm L).
inline std::vector<std::size_t> reservoir_indices(std::size_t population, std::size_t size,
                                                  std::uint64_t seed) {
  if (size > population) throw std::invalid_argument("sample larger than population");
  std::vector<std::size_t> reservoir(size);
  for (std::size_t i = 0; i < size; ++i) reservoir[i] = i;
  if (size == 0 || size == population) return reservoir;

  WordEngine rng(splitmix64(seed ^ 0x5a3b1eULL));
  auto unit = [&] {  // (0, 1)
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  };
  const double n = static_cast<double>(size);
  double w = std::exp(std::log(unit()) / n);
  std::size_t i = size - 1;
  for (;;) {
    const double skip = std::floor(std::log(unit()) / std::log1p(-w));
    if (skip >= static_cast<double>(population - i - 1)) break;
    i += static_cast<std::size_t>(skip) + 1;
    reservoir[rng() % size] = i;
    w *= std::exp(std::log(unit()) / n);
  }
  std::sort(reservoir.begin(), reservoir.end());
  return reservoir;
}

/// Draws floor(ratio * N) rows without replacement and computes the sample's
/// GROUP-BY statistics.
inline SampleSummary summarize_sample(const FactTable& table, const GroupByQuery& query,
                                      double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio <= 1.0)) throw std::invalid_argument("sampling ratio must be in (0, 1]");
  query.check_against(table.schema());
  const std::size_t n = table.row_count();
  const auto sample_size = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
  if (sample_size == 0)
    throw std::invalid_argument("sampling ratio " + std::to_string(ratio) + " selects no rows of a " +
                                std::to_string(n) + "-row table");

  const std::vector<std::size_t> picks = reservoir_indices(n, sample_size, seed);
  detail::StringMap<std::uint64_t> groups;
  groups.reserve(sample_size);
  std::string key;
  auto absorb = [&](Row row) {
    projected_key(row, query, key);
    if (auto it = groups.find(std::string_view(key)); it != groups.end())
      ++it->second;
    else
      groups.emplace(key, 1);
  };
  if (table.in_memory()) {
    for (std::size_t i : picks) absorb(table.row(i));
  } else {
    RowCursor c = table.scan();
    std::size_t next = 0;
    while (next < picks.size() && c.next())
      if (c.index() == picks[next]) {
        absorb(c.row());
        ++next;
      }
  }

  SampleSummary s;
  s.total_rows = n;
  s.sample_rows = sample_size;
  s.sample_distinct = groups.size();
  for (const auto& [_, count] : groups) s.max_multiplicity = std::max(s.max_multiplicity, count);
  return s;
}

/// Sample, fit and extrapolate; timing covers all three steps.
inline EstimateResult run_multifractal(const FactTable& table, const GroupByQuery& query, double ratio,
                                       std::uint64_t seed,
                                       FormulaVariant variant = FormulaVariant::corrected) {
  auto start = std::chrono::steady_clock::now();
  SampleSummary s = summarize_sample(table, query, ratio, seed);
  double est = estimate_multifractal(s, fit_model(s, variant), variant);
  std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
  return {est, elapsed.count()};
}

}  // namespace viewsize
