#pragma once

// Streaming view-size estimators: stochastic probabilistic counting, LogLog
// and Gibbons-Tirthapura adaptive sampling.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "viewsize/hashing.hpp"
#include "viewsize/ingest.hpp"

namespace viewsize {

namespace detail {

inline unsigned checked_log2(std::size_t budget, const char* what) {
  if (budget == 0 || !std::has_single_bit(budget))
    throw std::invalid_argument(std::string(what) + " budget must be a power of two, got " +
                                std::to_string(budget));
  auto k = static_cast<unsigned>(std::countr_zero(budget));
  if (k >= kHashBits)
    throw std::invalid_argument(std::string(what) + " budget 2^" + std::to_string(k) + " too large");
  return k;
}

}  // namespace detail

/// Probabilistic counting with stochastic averaging: an M x L bitmap.
class PcSketch {
 public:
  static constexpr double kPhi = 0.77351;
  static constexpr bool needs_key = false;

  explicit PcSketch(std::size_t budget)
      : log2_budget_(detail::checked_log2(budget, "pc")), rows_(budget, 0) {}

  void add(HashValue y) noexcept {
    const std::size_t row = y & (rows_.size() - 1);
    unsigned col = first_one_from_zero(y >> log2_budget_, kHashBits - log2_budget_);
    // Only reachable for M = 1 and y = 0; keeps the write inside L columns.
    if (col >= kHashBits) col = kHashBits - 1;
    rows_[row] |= HashValue{1} << col;
  }

  void add(std::string_view, HashValue y) noexcept { add(y); }

  /// Sum over rows of the position of the first zero bit.
  std::uint64_t zero_position_sum() const noexcept {
    std::uint64_t a = 0;
    for (HashValue r : rows_) a += static_cast<unsigned>(std::countr_one(r));
    return a;
  }

  double estimate() const noexcept {
    const double m = static_cast<double>(rows_.size());
    return m / kPhi * std::exp2(static_cast<double>(zero_position_sum()) / m);
  }

  std::size_t budget() const noexcept { return rows_.size(); }
  std::size_t bit_count() const noexcept { return rows_.size() * kHashBits; }
  const std::vector<HashValue>& bitmap() const noexcept { return rows_; }

 private:
  unsigned log2_budget_;
  std::vector<HashValue> rows_;
};

/// LogLog: 2^k registers; the k most-significant hash bits select a register,
/// which keeps the max first-one position (from 1) of the remaining low bits.
class LogLogSketch {
 public:
  static constexpr bool needs_key = false;

  explicit LogLogSketch(std::size_t budget)
      : k_(detail::checked_log2(budget, "loglog")), registers_(budget, 0) {}

  void add(HashValue y) noexcept {
    const std::size_t j = k_ == 0 ? 0 : (y >> (kHashBits - k_));
    const auto z = static_cast<std::uint8_t>(first_one_from_one(y, kHashBits - k_));
    if (z > registers_[j]) registers_[j] = z;
  }

  void add(std::string_view, HashValue y) noexcept { add(y); }

  static double alpha(std::size_t budget) noexcept {
    constexpr double pi = std::numbers::pi;
    const double ln2 = std::numbers::ln2;
    return 0.39701 - (2 * pi * pi + ln2 * ln2) / (48.0 * static_cast<double>(budget));
  }

  double estimate() const noexcept {
    const double m = static_cast<double>(registers_.size());
    double sum = 0;
    for (auto r : registers_) sum += r;
    return alpha(registers_.size()) * m * std::exp2(sum / m);
  }

  std::size_t budget() const noexcept { return registers_.size(); }
  unsigned bucket_bits() const noexcept { return k_; }
  const std::vector<std::uint8_t>& registers() const noexcept { return registers_; }

 private:
  unsigned k_;
  std::vector<std::uint8_t> registers_;
};

/// Gibbons-Tirthapura adaptive sampling. Keeps at most M distinct tuples whose
/// hash has its first one-bit at position >= level; the estimate is
/// 2^level * |buffer|.
class GtSketch {
 public:
  static constexpr bool needs_key = true;

  explicit GtSketch(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("gt capacity must be at least 1");
  }

  void add(std::string_view tuple_key, HashValue y) {
    const unsigned j = first_one_from_zero(y, kHashBits);
    if (j < level_) return;
    if (auto it = buffer_.find(tuple_key); it != buffer_.end()) return;
    buffer_.emplace(std::string(tuple_key), static_cast<std::uint8_t>(j));
    while (buffer_.size() > capacity_) {
      ++level_;
      std::erase_if(buffer_, [this](const auto& e) { return e.second < level_; });
    }
  }

  void add(const Tuple& t, HashValue y) { add(tuple_key(t), y); }

  double estimate() const noexcept {
    return std::ldexp(static_cast<double>(buffer_.size()), static_cast<int>(level_));
  }

  unsigned level() const noexcept { return level_; }
  std::size_t size() const noexcept { return buffer_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }

  /// Smallest stored position; equals level() or more when non-empty.
  unsigned min_stored_level() const noexcept {
    unsigned m = kHashBits + 1;
    for (const auto& e : buffer_) m = std::min<unsigned>(m, e.second);
    return m;
  }

 private:
  std::size_t capacity_;
  unsigned level_ = 0;
  detail::StringMap<std::uint8_t> buffer_;
};

enum class Method { pc, loglog, gt, multifractal };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::pc: return "pc";
    case Method::loglog: return "loglog";
    case Method::gt: return "gt";
    case Method::multifractal: return "multifractal";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  if (s == "pc") return Method::pc;
  if (s == "loglog") return Method::loglog;
  if (s == "gt") return Method::gt;
  if (s == "multifractal" || s == "mf") return Method::multifractal;
  throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

inline bool is_sketch(Method m) noexcept { return m != Method::multifractal; }

struct EstimateResult {
  double estimate = 0;
  double wall_millis = 0;
};

/// Single pass over `table`: project, hash, absorb. Timing covers the
/// streaming loop only.
template <class Sketch>
double stream_into(Sketch& sketch, const FactTable& table, TupleHasher& hasher) {
  const GroupByQuery& query = hasher.query();
  query.check_against(table.schema());
  const bool want_key = Sketch::needs_key || hasher.needs_key();
  std::string key;
  auto start = std::chrono::steady_clock::now();
  table.for_each_row([&](Row row) {
    if (want_key) projected_key(row, query, key);
    sketch.add(std::string_view(key), hasher.hash_row(row, key));
  });
  std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
  return elapsed.count();
}

inline EstimateResult run_estimator(Method method, const FactTable& table, TupleHasher& hasher,
                                    std::size_t budget) {
  auto run = [&](auto sketch) {
    double ms = stream_into(sketch, table, hasher);
    return EstimateResult{sketch.estimate(), ms};
  };
  switch (method) {
    case Method::pc: return run(PcSketch(budget));
    case Method::loglog: return run(LogLogSketch(budget));
    case Method::gt: return run(GtSketch(budget));
    case Method::multifractal: break;
  }
  throw std::invalid_argument("run_estimator needs a sketch method (pc, loglog or gt)");
}

}  // namespace viewsize
