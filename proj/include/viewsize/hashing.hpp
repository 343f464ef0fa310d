#pragma once

// Per-dimension lookup-table hashing. Every attribute value of a dimension
// gets a fresh pseudorandom 32-bit word on first sight; a tuple hashes to the
// XOR of its attributes' words.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "viewsize/ingest.hpp"

namespace viewsize {

using HashValue = std::uint32_t;
inline constexpr unsigned kHashBits = 32;

/// Generator behind every random word in the library: std::mt19937_64
/// (64-bit seed, period 2^19937 - 1). Words take the high 32 output bits.
using WordEngine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Index of the least-significant set bit among the low `width` bits, counting
/// from 0. Returns `width` when those bits are all zero.
constexpr unsigned first_one_from_zero(HashValue word, unsigned width) noexcept {
  if (width < kHashBits) word &= (HashValue{1} << width) - 1;
  if (word == 0) return width;
  return static_cast<unsigned>(std::countr_zero(word));
}

/// Same position counted from 1; `width + 1` when no bit is set.
constexpr unsigned first_one_from_one(HashValue word, unsigned width) noexcept {
  return first_one_from_zero(word, width) + 1;
}

namespace detail {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

template <class V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

}  // namespace detail

/// Memoized random word per attribute value (one table T_i per dimension).
class DimensionTable {
 public:
  explicit DimensionTable(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  HashValue hash(std::string_view value) {
    if (auto it = entries_.find(value); it != entries_.end()) return it->second;
    if (frozen_) throw std::logic_error("unseen attribute value in frozen dimension table");
    HashValue w = static_cast<HashValue>(engine_() >> 32);
    entries_.emplace(std::string(value), w);
    return w;
  }

  std::optional<HashValue> lookup(std::string_view value) const {
    if (auto it = entries_.find(value); it != entries_.end()) return it->second;
    return std::nullopt;
  }

  /// After freezing, misses throw and concurrent lookup() is safe.
  void freeze() noexcept { frozen_ = true; }
  bool frozen() const noexcept { return frozen_; }

  std::size_t size() const noexcept { return entries_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  WordEngine engine_;
  detail::StringMap<HashValue> entries_;
  bool frozen_ = false;
};

enum class HashingMode { xor_tables, ideal };

inline std::string_view to_string(HashingMode m) {
  return m == HashingMode::ideal ? "ideal" : "xor-tables";
}

inline HashingMode parse_hashing_mode(std::string_view s) {
  if (s == "xor-tables" || s == "xor") return HashingMode::xor_tables;
  if (s == "ideal") return HashingMode::ideal;
  throw std::invalid_argument("unknown hashing mode '" + std::string(s) + "'");
}

/// Seed of the table for schema dimension `dim` under hasher seed `seed`.
/// A dimension keeps the same table words across queries for a given seed.
constexpr std::uint64_t dimension_seed(std::uint64_t seed, std::size_t dim) noexcept {
  return splitmix64(seed ^ splitmix64(0x5eed0000ULL + dim));
}

/// Hashes tuples of one GROUP-BY query to 32-bit words.
///
/// In xor-tables mode the hash is T_1(x_1) ^ ... ^ T_d(x_d), 3-wise
/// independent. In ideal mode every distinct tuple draws its own word, which
/// is fully independent at the cost of memory proportional to the view size.
class TupleHasher {
 public:
  TupleHasher(const GroupByQuery& query, std::uint64_t seed, HashingMode mode = HashingMode::xor_tables)
      : query_(query), seed_(seed), mode_(mode), ideal_engine_(splitmix64(seed ^ 0x1dea1ULL)) {
    if (mode_ == HashingMode::xor_tables) {
      tables_.reserve(query.arity());
      for (std::size_t d : query.dimension_indices()) tables_.emplace_back(dimension_seed(seed, d));
    }
  }

  /// Hash of a projected tuple; arity must match the query.
  HashValue hash_tuple(const Tuple& t) {
    if (t.values.size() != query_.arity())
      throw std::invalid_argument("tuple arity " + std::to_string(t.values.size()) +
                                  " does not match hasher arity " + std::to_string(query_.arity()));
    if (mode_ == HashingMode::ideal) return hash_key(tuple_key(t));
    HashValue h = 0;
    for (std::size_t i = 0; i < t.values.size(); ++i) h ^= tables_[i].hash(t.values[i]);
    return h;
  }

  /// Hash of the projection of a full fact row. `key` must be the row's
  /// projected_key() in ideal mode and is ignored otherwise.
  HashValue hash_row(Row row, std::string_view key = {}) {
    if (mode_ == HashingMode::ideal) return hash_key(key);
    HashValue h = 0;
    const auto& dims = query_.dimension_indices();
    for (std::size_t i = 0; i < dims.size(); ++i) h ^= tables_[i].hash(row[dims[i]]);
    return h;
  }

  /// True when hash_row needs the projected key.
  bool needs_key() const noexcept { return mode_ == HashingMode::ideal; }

  void freeze() noexcept {
    frozen_ = true;
    for (auto& t : tables_) t.freeze();
  }

  const GroupByQuery& query() const noexcept { return query_; }
  HashingMode mode() const noexcept { return mode_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<DimensionTable>& tables() const noexcept { return tables_; }

  /// Number of memoized words across all tables.
  std::size_t memo_size() const noexcept {
    if (mode_ == HashingMode::ideal) return ideal_.size();
    std::size_t n = 0;
    for (const auto& t : tables_) n += t.size();
    return n;
  }

 private:
  HashValue hash_key(std::string_view key) {
    if (auto it = ideal_.find(key); it != ideal_.end()) return it->second;
    if (frozen_) throw std::logic_error("unseen tuple in frozen ideal hasher");
    HashValue w = static_cast<HashValue>(ideal_engine_() >> 32);
    ideal_.emplace(std::string(key), w);
    return w;
  }

  GroupByQuery query_;
  std::uint64_t seed_;
  HashingMode mode_;
  std::vector<DimensionTable> tables_;
  WordEngine ideal_engine_;
  detail::StringMap<HashValue> ideal_;
  bool frozen_ = false;
};

}  // namespace viewsize
