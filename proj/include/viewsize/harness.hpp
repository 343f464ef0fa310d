#pragma once

// Experiment harness: synthetic fact tables, exact view sizes, the
// query x budget x seed sweep, error statistics and the on-disk formats.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "viewsize/bounds.hpp"
#include "viewsize/hashing.hpp"
#include "viewsize/ingest.hpp"
#include "viewsize/multifractal.hpp"
#include "viewsize/sketches.hpp"

namespace viewsize {

// ---------------------------------------------------------------------------
// Synthetic data

struct Distribution {
  enum class Kind { uniform, zipf } kind = Kind::uniform;
  double exponent = 1.0;  // zipf only

  static Distribution uniform() { return {}; }
  static Distribution zipf(double s) { return {Kind::zipf, s}; }

  /// "uniform" or "zipf:<s>" (bare "zipf" means s = 1).
  static Distribution parse(std::string_view text) {
    if (text == "uniform") return uniform();
    if (text == "zipf") return zipf(1.0);
    if (text.starts_with("zipf:")) {
      double s = std::stod(std::string(text.substr(5)));
      if (!(s > 0)) throw std::invalid_argument("zipf exponent must be positive");
      return zipf(s);
    }
    throw std::invalid_argument("unknown distribution '" + std::string(text) + "'");
  }

  std::string str() const {
    if (kind == Kind::uniform) return "uniform";
    std::ostringstream os;
    os << "zipf:" << exponent;
    return os.str();
  }
};

struct SyntheticSpec {
  std::size_t rows = 0;
  std::vector<std::size_t> cardinalities;
  Distribution distribution;
  std::uint64_t seed = 0;

  void validate() const {
    if (rows < 1) throw std::invalid_argument("synthetic table needs at least one row");
    if (cardinalities.empty()) throw std::invalid_argument("synthetic table needs at least one dimension");
    for (auto c : cardinalities)
      if (c < 1) throw std::invalid_argument("dimension cardinality must be >= 1");
    if (distribution.kind == Distribution::Kind::zipf && !(distribution.exponent > 0))
      throw std::invalid_argument("zipf exponent must be positive");
  }
};

namespace detail {

/// Draws value ranks in [0, n) for one dimension.
class RankSampler {
 public:
  RankSampler(std::size_t n, const Distribution& dist) : n_(n) {
    if (dist.kind == Distribution::Kind::zipf) {
      cdf_.resize(n);
      double acc = 0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += std::pow(static_cast<double>(i + 1), -dist.exponent);
        cdf_[i] = acc;
      }
      for (auto& c : cdf_) c /= acc;
    }
  }

  std::size_t operator()(WordEngine& rng) const {
    const std::uint64_t word = rng();
    if (cdf_.empty())
      return static_cast<std::size_t>((static_cast<unsigned __int128>(word) * n_) >> 64);
    const double u = static_cast<double>(word >> 11) * 0x1.0p-53;
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), n_ - 1);
  }

 private:
  std::size_t n_;
  std::vector<double> cdf_;
};

}  // namespace detail

/// Deterministic in-memory table; attribute values are decimal ranks, rank 0
/// being the most frequent under zipf.
inline FactTable generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t d = spec.cardinalities.size();
  std::vector<detail::RankSampler> samplers;
  std::vector<std::vector<std::string>> labels(d);
  for (std::size_t j = 0; j < d; ++j) {
    samplers.emplace_back(spec.cardinalities[j], spec.distribution);
    labels[j].reserve(spec.cardinalities[j]);
    for (std::size_t v = 0; v < spec.cardinalities[j]; ++v) labels[j].push_back(std::to_string(v));
  }
  WordEngine rng(splitmix64(spec.seed ^ 0xda7aULL));
  std::vector<std::string> cells;
  cells.reserve(spec.rows * d);
  for (std::size_t i = 0; i < spec.rows; ++i)
    for (std::size_t j = 0; j < d; ++j) cells.push_back(labels[j][samplers[j](rng)]);
  return FactTable::from_cells(Schema::generated(d), std::move(cells));
}

// ---------------------------------------------------------------------------
// Ground truth

inline constexpr std::uint64_t kDefaultDistinctCap = 100'000'000;

/// Exact number of distinct projected tuples (one full scan).
inline std::uint64_t exact_count(const FactTable& table, const GroupByQuery& query,
                                 std::uint64_t cap = kDefaultDistinctCap) {
  query.check_against(table.schema());
  std::unordered_set<std::string, detail::StringHash, std::equal_to<>> seen;
  std::string key;
  table.for_each_row([&](Row row) {
    projected_key(row, query, key);
    if (seen.find(std::string_view(key)) == seen.end()) {
      if (seen.size() >= cap)
        throw std::length_error("exact count exceeds distinct-count cap of " + std::to_string(cap));
      seen.insert(key);
    }
  });
  return seen.size();
}

// ---------------------------------------------------------------------------
// Plans

struct ExperimentPlan {
  std::optional<std::string> source_path;
  TableOptions table_options;
  std::optional<SyntheticSpec> synthetic;
  std::vector<GroupByQuery> queries;
  std::vector<Method> methods;
  std::vector<std::size_t> budgets;
  std::vector<std::uint64_t> seeds;
  std::vector<double> ratios;
  HashingMode hashing = HashingMode::xor_tables;
  FormulaVariant variant = FormulaVariant::corrected;

  /// Defaults follow the reference grid: four budgets, 20 seeds and four
  /// sampling ratios.
  static ExperimentPlan with_defaults() {
    ExperimentPlan p;
    p.budgets = {16, 64, 256, 2048};
    for (std::uint64_t s = 0; s < 20; ++s) p.seeds.push_back(s);
    p.ratios = {0.001, 0.003, 0.005, 0.007};
    return p;
  }

  void validate() const {
    if (source_path.has_value() == synthetic.has_value())
      throw std::invalid_argument("plan needs exactly one of source=<path> or source=synthetic");
    if (queries.empty()) throw std::invalid_argument("plan has no queries");
    if (methods.empty()) throw std::invalid_argument("plan has no methods");
    if (seeds.empty()) throw std::invalid_argument("plan has no seeds");
    const bool any_sketch = std::any_of(methods.begin(), methods.end(), is_sketch);
    const bool any_mf = std::any_of(methods.begin(), methods.end(),
                                    [](Method m) { return m == Method::multifractal; });
    if (any_sketch && budgets.empty()) throw std::invalid_argument("plan has sketch methods but no budgets");
    if (any_mf && ratios.empty()) throw std::invalid_argument("plan has multifractal but no ratios");
    for (auto r : ratios)
      if (!(r > 0 && r <= 1)) throw std::invalid_argument("ratios must lie in (0, 1]");
    if (synthetic) synthetic->validate();
  }

  FactTable load_table() const {
    return synthetic ? generate_synthetic(*synthetic) : FactTable::open(*source_path, table_options);
  }
};

class PlanError : public std::runtime_error {
 public:
  PlanError(const std::string& what, std::size_t line)
      : std::runtime_error("plan line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t end = s.find(sep, start);
    out.push_back(trim(s.substr(start, end == std::string_view::npos ? s.npos : end - start)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view s) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("bad number '" + std::string(s) + "'");
  return v;
}

/// "0,1,5" or "0..19" (inclusive) or a mix "0..3,7".
inline std::vector<std::uint64_t> parse_seed_list(std::string_view s) {
  std::vector<std::uint64_t> out;
  for (auto item : split(s, ',')) {
    if (auto dots = item.find(".."); dots != std::string_view::npos) {
      auto lo = parse_number<std::uint64_t>(item.substr(0, dots));
      auto hi = parse_number<std::uint64_t>(item.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("empty seed range '" + std::string(item) + "'");
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(parse_number<std::uint64_t>(item));
    }
  }
  return out;
}

}  // namespace detail

/// Parses the line-oriented key=value plan format. Blank lines and lines
/// starting with '#' are ignored.
///
///   source=data.csv | source=synthetic
///   delimiter=comma|pipe|tab   header=true|false   skip_bad_rows=true|false
///   synthetic.rows=100000  synthetic.cardinalities=10,100,1000
///   synthetic.distribution=uniform|zipf:<s>  synthetic.seed=0
///   queries=0,2;1;0,1,2   methods=pc,loglog,gt,multifractal
///   budgets=16,64,256,2048   seeds=0..19   ratios=0.001,0.005
///   hashing=xor-tables|ideal   variant=corrected|paper-literal
inline ExperimentPlan parse_plan(std::istream& in) {
  ExperimentPlan plan = ExperimentPlan::with_defaults();
  SyntheticSpec synth;
  bool is_synthetic = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    auto eq = text.find('=');
    if (eq == std::string_view::npos) throw PlanError("expected key=value", line_no);
    std::string_view key = detail::trim(text.substr(0, eq));
    std::string_view value = detail::trim(text.substr(eq + 1));
    try {
      auto as_bool = [&] {
        if (value == "true" || value == "1" || value == "yes") return true;
        if (value == "false" || value == "0" || value == "no") return false;
        throw std::invalid_argument("expected true or false");
      };
      if (key == "source") {
        if (value == "synthetic")
          is_synthetic = true;
        else
          plan.source_path = std::string(value);
      } else if (key == "delimiter") {
        plan.table_options.delimiter = parse_delimiter(value);
      } else if (key == "header") {
        plan.table_options.has_header = as_bool();
      } else if (key == "skip_bad_rows") {
        plan.table_options.skip_bad_rows = as_bool();
      } else if (key == "queries") {
        plan.queries.clear();
        for (auto q : detail::split(value, ';'))
          if (!q.empty()) plan.queries.push_back(GroupByQuery::parse(q));
      } else if (key == "methods") {
        plan.methods.clear();
        for (auto m : detail::split(value, ',')) plan.methods.push_back(parse_method(m));
      } else if (key == "budgets") {
        plan.budgets.clear();
        for (auto b : detail::split(value, ',')) plan.budgets.push_back(detail::parse_number<std::size_t>(b));
      } else if (key == "seeds") {
        plan.seeds = detail::parse_seed_list(value);
      } else if (key == "ratios") {
        plan.ratios.clear();
        for (auto r : detail::split(value, ',')) plan.ratios.push_back(std::stod(std::string(r)));
      } else if (key == "hashing") {
        plan.hashing = parse_hashing_mode(value);
      } else if (key == "variant") {
        plan.variant = parse_formula_variant(value);
      } else if (key == "synthetic.rows") {
        synth.rows = detail::parse_number<std::size_t>(value);
      } else if (key == "synthetic.cardinalities") {
        synth.cardinalities.clear();
        for (auto c : detail::split(value, ',')) synth.cardinalities.push_back(detail::parse_number<std::size_t>(c));
      } else if (key == "synthetic.distribution") {
        synth.distribution = Distribution::parse(value);
      } else if (key == "synthetic.seed") {
        synth.seed = detail::parse_number<std::uint64_t>(value);
      } else {
        throw std::invalid_argument("unknown key '" + std::string(key) + "'");
      }
    } catch (const PlanError&) {
      throw;
    } catch (const std::exception& e) {
      throw PlanError(e.what(), line_no);
    }
  }
  if (is_synthetic) plan.synthetic = synth;
  try {
    plan.validate();
  } catch (const std::exception& e) {
    throw PlanError(e.what(), line_no);
  }
  return plan;
}

inline ExperimentPlan parse_plan(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_plan(in);
}

// ---------------------------------------------------------------------------
// Records

struct EstimationRecord {
  Method method = Method::gt;
  std::string query;  // GroupByQuery::id()
  double budget_or_ratio = 0;
  std::uint64_t seed = 0;
  double estimate = 0;
  std::uint64_t exact = 0;
  double rel_error = 0;
  double wall_millis = 0;

  /// Identity of the sweep cell this record belongs to.
  std::string cell_key() const;

  /// True when every field except wall_millis matches.
  bool same_result(const EstimationRecord& o) const {
    return method == o.method && query == o.query && budget_or_ratio == o.budget_or_ratio &&
           seed == o.seed && estimate == o.estimate && exact == o.exact && rel_error == o.rel_error;
  }
};

inline double relative_error(double estimate, std::uint64_t exact) {
  if (exact == 0) return estimate == 0 ? 0.0 : INFINITY;
  return std::fabs(estimate - static_cast<double>(exact)) / static_cast<double>(exact);
}

/// Number formatting: 6 significant digits, or round-trip precision in raw mode.
inline std::string format_number(double v, bool raw = false) {
  char buf[64];
  std::snprintf(buf, sizeof buf, raw ? "%.17g" : "%.6g", v);
  return buf;
}

/// Budgets and ratios are formatted canonically so cell keys compare as text.
inline std::string format_parameter(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string EstimationRecord::cell_key() const {
  return std::string(to_string(method)) + ',' + query + ',' + format_parameter(budget_or_ratio) + ',' +
         std::to_string(seed);
}

inline constexpr std::string_view kRecordHeader =
    "method,query,budget_or_ratio,seed,estimate,exact,rel_error,wall_millis";

inline void write_record(std::ostream& out, const EstimationRecord& r, bool raw = false) {
  out << to_string(r.method) << ',' << r.query << ',' << format_parameter(r.budget_or_ratio) << ','
      << r.seed << ',' << format_number(r.estimate, raw) << ',' << r.exact << ','
      << format_number(r.rel_error, raw) << ',' << format_number(r.wall_millis, raw) << '\n';
}

/// Reads a record log written by write_record. A truncated final line (from
/// an interrupted run) is ignored.
inline std::vector<EstimationRecord> read_records(std::istream& in) {
  std::vector<EstimationRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == kRecordHeader || line.front() == '#') continue;
    auto f = detail::split(line, ',');
    if (f.size() != 8) {
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw std::runtime_error("record log line " + std::to_string(line_no) + ": expected 8 fields");
    }
    try {
      EstimationRecord r;
      r.method = parse_method(f[0]);
      r.query = std::string(f[1]);
      r.budget_or_ratio = std::stod(std::string(f[2]));
      r.seed = detail::parse_number<std::uint64_t>(f[3]);
      r.estimate = std::stod(std::string(f[4]));
      r.exact = detail::parse_number<std::uint64_t>(f[5]);
      r.rel_error = std::stod(std::string(f[6]));
      r.wall_millis = std::stod(std::string(f[7]));
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw std::runtime_error("record log line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Protocol

struct CellFailure {
  std::string cell_key;
  std::string message;
};

struct ProtocolOptions {
  unsigned jobs = 1;
  std::set<std::string> completed;  // cell keys to skip
  std::function<void(const EstimationRecord&)> on_record;  // called under a lock
  std::function<void(const CellFailure&)> on_failure;      // called under a lock
  std::uint64_t distinct_cap = kDefaultDistinctCap;
};

struct ProtocolResult {
  std::vector<EstimationRecord> records;  // sweep order
  std::vector<CellFailure> failures;
  std::map<std::string, std::uint64_t> exact;  // per query id
};

struct Cell {
  std::size_t query_index;
  Method method;
  double parameter;  // budget or ratio
  std::uint64_t seed;
};

/// Cells in sweep order: query, method, budget (or ratio), seed.
inline std::vector<Cell> plan_cells(const ExperimentPlan& plan) {
  std::vector<Cell> cells;
  for (std::size_t q = 0; q < plan.queries.size(); ++q)
    for (Method m : plan.methods) {
      const auto params = is_sketch(m) ? std::vector<double>(plan.budgets.begin(), plan.budgets.end())
                                       : plan.ratios;
      for (double p : params)
        for (std::uint64_t s : plan.seeds) cells.push_back({q, m, p, s});
    }
  return cells;
}

/// Runs one estimation on a table. Each call builds its own hasher.
inline EstimateResult estimate_once(const FactTable& table, const GroupByQuery& query, Method method,
                                    double parameter, std::uint64_t seed, HashingMode hashing,
                                    FormulaVariant variant = FormulaVariant::corrected) {
  if (method == Method::multifractal) return run_multifractal(table, query, parameter, seed, variant);
  TupleHasher hasher(query, seed, hashing);
  return run_estimator(method, table, hasher, static_cast<std::size_t>(parameter));
}

/// Executes the sweep. Exact counts are computed once per query, before any
/// cell runs. Failed cells are reported and skipped.
inline ProtocolResult run_protocol(const ExperimentPlan& plan, const FactTable& table,
                                   ProtocolOptions options = {}) {
  plan.validate();
  ProtocolResult result;
  std::vector<std::uint64_t> exact(plan.queries.size());
  for (std::size_t q = 0; q < plan.queries.size(); ++q) {
    exact[q] = exact_count(table, plan.queries[q], options.distinct_cap);
    result.exact[plan.queries[q].id()] = exact[q];
  }

  std::vector<Cell> cells = plan_cells(plan);
  std::vector<std::optional<EstimationRecord>> slots(cells.size());
  std::mutex sink;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      EstimationRecord r;
      r.method = c.method;
      r.query = plan.queries[c.query_index].id();
      r.budget_or_ratio = c.parameter;
      r.seed = c.seed;
      r.exact = exact[c.query_index];
      const std::string key = r.cell_key();
      if (options.completed.count(key)) continue;
      try {
        EstimateResult est = estimate_once(table, plan.queries[c.query_index], c.method, c.parameter,
                                           c.seed, plan.hashing, plan.variant);
        r.estimate = est.estimate;
        r.wall_millis = est.wall_millis;
        r.rel_error = relative_error(r.estimate, r.exact);
        std::lock_guard lock(sink);
        if (options.on_record) options.on_record(r);
        slots[i] = std::move(r);
      } catch (const std::exception& e) {
        std::lock_guard lock(sink);
        CellFailure f{key, e.what()};
        if (options.on_failure) options.on_failure(f);
        result.failures.push_back(std::move(f));
      }
    }
  };

  const unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (auto& s : slots)
    if (s) result.records.push_back(std::move(*s));
  return result;
}

// ---------------------------------------------------------------------------
// Error statistics

struct ErrorSummary {
  Method method = Method::gt;
  std::string query;
  double budget_or_ratio = 0;
  std::uint64_t exact = 0;
  std::size_t n = 0;
  double max_error = 0;
  double p95_error = 0;
  double mean_error = 0;
  double rms_error = 0;
  double mean_wall_millis = 0;
};

/// The ceil(0.95 n)-th smallest value: the 19th of 20, so the error met
/// "19 times out of 20".
inline double percentile95(std::vector<double> errors) {
  if (errors.empty()) throw std::invalid_argument("percentile of an empty group");
  std::sort(errors.begin(), errors.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(errors.size()) - 1e-9));
  return errors[std::max<std::size_t>(rank, 1) - 1];
}

/// Summarizes one group of records (normally one method, query and budget).
inline ErrorSummary summarize_group(const std::vector<EstimationRecord>& group) {
  if (group.empty()) throw std::invalid_argument("cannot summarize an empty group");
  ErrorSummary s;
  s.method = group.front().method;
  s.query = group.front().query;
  s.budget_or_ratio = group.front().budget_or_ratio;
  s.exact = group.front().exact;
  s.n = group.size();
  std::vector<double> errors;
  double sum = 0, sum_sq = 0, wall = 0;
  for (const auto& r : group) {
    errors.push_back(r.rel_error);
    sum += r.rel_error;
    sum_sq += r.rel_error * r.rel_error;
    wall += r.wall_millis;
    s.max_error = std::max(s.max_error, r.rel_error);
  }
  const double n = static_cast<double>(group.size());
  s.mean_error = sum / n;
  s.rms_error = std::sqrt(sum_sq / n);
  s.mean_wall_millis = wall / n;
  s.p95_error = percentile95(std::move(errors));
  return s;
}

/// Groups records by (method, query, budget_or_ratio) and summarizes each.
inline std::vector<ErrorSummary> summarize_errors(const std::vector<EstimationRecord>& records) {
  std::map<std::tuple<std::string, std::string, double>, std::vector<EstimationRecord>> groups;
  for (const auto& r : records)
    groups[{std::string(to_string(r.method)), r.query, r.budget_or_ratio}].push_back(r);
  std::vector<ErrorSummary> out;
  for (const auto& [_, g] : groups) out.push_back(summarize_group(g));
  return out;
}

inline constexpr std::string_view kSummaryHeader =
    "method,query,budget_or_ratio,n,exact,max_error,p95_error,mean_error,rms_error,mean_wall_millis";

inline void write_summaries(std::ostream& out, const std::vector<ErrorSummary>& summaries, bool raw = false) {
  out << kSummaryHeader << '\n';
  for (const auto& s : summaries)
    out << to_string(s.method) << ',' << s.query << ',' << format_parameter(s.budget_or_ratio) << ','
        << s.n << ',' << s.exact << ',' << format_number(s.max_error, raw) << ','
        << format_number(s.p95_error, raw) << ',' << format_number(s.mean_error, raw) << ','
        << format_number(s.rms_error, raw) << ',' << format_number(s.mean_wall_millis, raw) << '\n';
}

inline constexpr std::string_view kPlotHeader = "view_size,budget_or_ratio,p95_error";

/// Plot rows for one method, sorted by exact view size then parameter. The
/// first line is a '#' metadata comment.
inline void emit_plot_data(std::ostream& out, const std::vector<ErrorSummary>& summaries, Method method,
                           bool raw = false) {
  std::vector<const ErrorSummary*> rows;
  for (const auto& s : summaries)
    if (s.method == method) rows.push_back(&s);
  std::stable_sort(rows.begin(), rows.end(), [](const ErrorSummary* a, const ErrorSummary* b) {
    return std::tie(a->exact, a->budget_or_ratio) < std::tie(b->exact, b->budget_or_ratio);
  });
  out << "# method=" << to_string(method) << " x=view_size y=p95_error series="
      << (is_sketch(method) ? "budget" : "ratio") << " axes=log-log\n";
  out << kPlotHeader << '\n';
  for (const auto* s : rows)
    out << s->exact << ',' << format_parameter(s->budget_or_ratio) << ',' << format_number(s->p95_error, raw)
        << '\n';
}

}  // namespace viewsize
