#pragma once

// Delimited fact tables, repeatable row scans and GROUP-BY projection.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace viewsize {

class IngestError : public std::runtime_error {
 public:
  IngestError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}

  /// 1-based line number in the source file, or 0 when not positioned.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A row is a view of dimension_count attribute values.
using Row = std::span<const std::string>;

class Schema {
 public:
  Schema() = default;

  explicit Schema(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw IngestError("schema must have at least one dimension");
    std::vector<std::string> sorted = names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw IngestError("duplicate dimension name in schema");
  }

  static Schema generated(std::size_t dimension_count) {
    std::vector<std::string> names;
    names.reserve(dimension_count);
    for (std::size_t i = 0; i < dimension_count; ++i) names.push_back("col" + std::to_string(i));
    return Schema(std::move(names));
  }

  std::size_t dimension_count() const noexcept { return names_.size(); }
  const std::vector<std::string>& dimension_names() const noexcept { return names_; }

 private:
  std::vector<std::string> names_;
};

/// Dimension subset defining a view. Indices are kept sorted and unique.
class GroupByQuery {
 public:
  GroupByQuery() = default;

  explicit GroupByQuery(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw std::invalid_argument("group-by query needs at least one dimension");
    std::sort(dims_.begin(), dims_.end());
    if (std::adjacent_find(dims_.begin(), dims_.end()) != dims_.end())
      throw std::invalid_argument("group-by query repeats a dimension");
  }

  GroupByQuery(std::initializer_list<std::size_t> dims)
      : GroupByQuery(std::vector<std::size_t>(dims)) {}

  /// Parses "0,2,5".
  static GroupByQuery parse(std::string_view text) {
    std::vector<std::size_t> dims;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find(',', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view field = text.substr(start, end - start);
      if (field.empty() || field.find_first_not_of("0123456789") != std::string_view::npos)
        throw std::invalid_argument("bad group-by query '" + std::string(text) + "'");
      dims.push_back(std::stoul(std::string(field)));
      start = end + 1;
    }
    return GroupByQuery(std::move(dims));
  }

  const std::vector<std::size_t>& dimension_indices() const noexcept { return dims_; }
  std::size_t arity() const noexcept { return dims_.size(); }

  /// Stable identifier used in logs, e.g. "0+2".
  std::string id() const {
    std::string out;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
      if (i) out += '+';
      out += std::to_string(dims_[i]);
    }
    return out;
  }

  void check_against(const Schema& schema) const {
    if (!dims_.empty() && dims_.back() >= schema.dimension_count())
      throw std::out_of_range("query dimension " + std::to_string(dims_.back()) +
                              " out of range for schema of " +
                              std::to_string(schema.dimension_count()) + " dimensions");
  }

  friend bool operator==(const GroupByQuery&, const GroupByQuery&) = default;

 private:
  std::vector<std::size_t> dims_;
};

struct Tuple {
  std::vector<std::string> values;
  friend bool operator==(const Tuple&, const Tuple&) = default;
};

inline Tuple project(Row row, const GroupByQuery& query) {
  Tuple t;
  t.values.reserve(query.arity());
  for (std::size_t d : query.dimension_indices()) {
    if (d >= row.size())
      throw std::out_of_range("query dimension " + std::to_string(d) + " out of range for row of " +
                              std::to_string(row.size()) + " values");
    t.values.push_back(row[d]);
  }
  return t;
}

namespace detail {

inline void append_field(std::string& out, std::string_view v) {
  auto n = static_cast<std::uint32_t>(v.size());
  out.append(reinterpret_cast<const char*>(&n), sizeof n);
  out.append(v);
}

}  // namespace detail

/// Unambiguous byte key for the projection of `row` (length-prefixed fields).
/// Equal keys iff equal tuples.
inline void projected_key(Row row, const GroupByQuery& query, std::string& out) {
  out.clear();
  for (std::size_t d : query.dimension_indices()) detail::append_field(out, row[d]);
}

inline std::string tuple_key(const Tuple& t) {
  std::string out;
  for (const auto& v : t.values) detail::append_field(out, v);
  return out;
}

struct TableOptions {
  char delimiter = ',';
  bool has_header = false;
  bool skip_bad_rows = false;
};

inline char parse_delimiter(std::string_view name) {
  if (name == "comma" || name == ",") return ',';
  if (name == "pipe" || name == "|") return '|';
  if (name == "tab" || name == "\t" || name == "\\t") return '\t';
  throw std::invalid_argument("unsupported delimiter '" + std::string(name) +
                              "' (expected comma, pipe or tab)");
}

namespace detail {

/// Splits one physical line. Strips a trailing CR and one trailing delimiter.
inline void split_line(std::string& line, char delim, std::vector<std::string>& fields,
                       std::size_t& count) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (!line.empty() && line.back() == delim) line.pop_back();
  count = 0;
  std::size_t start = 0;
  for (;;) {
    std::size_t end = line.find(delim, start);
    if (end == std::string::npos) end = line.size();
    if (count == fields.size()) fields.emplace_back();
    fields[count].assign(line, start, end - start);
    ++count;
    if (end == line.size()) break;
    start = end + 1;
  }
}

}  // namespace detail

class FactTable;

/// Single-consumer forward cursor over the data rows of a FactTable.
/// Each cursor owns its own file handle.
class RowCursor {
 public:
  /// Advances to the next row; false at end of table.
  bool next();

  /// Current row; valid until the next call to next().
  Row row() const noexcept { return current_; }

  /// 0-based index of the current row among accepted data rows.
  std::size_t index() const noexcept { return index_ - 1; }

 private:
  friend class FactTable;
  explicit RowCursor(const FactTable& table);

  const FactTable* table_;
  std::unique_ptr<std::ifstream> in_;
  std::size_t line_no_ = 0;
  std::size_t index_ = 0;
  std::string line_;
  std::vector<std::string> fields_;
  Row current_;
};

/// A fact table of N rows with d opaque text attributes each, backed by a
/// delimited file or by memory. Cheap to copy; scans are repeatable.
class FactTable {
 public:
  /// Opens and validates a delimited file. One full scan establishes the
  /// schema and row_count.
  static FactTable open(const std::string& path, TableOptions options = {}) {
    FactTable t;
    t.path_ = path;
    t.options_ = options;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open '" + path + "'");

    std::string line;
    std::vector<std::string> fields;
    std::size_t count = 0, line_no = 0, rows = 0, skipped = 0, lines = 0;
    std::optional<std::size_t> width;
    while (std::getline(in, line)) {
      ++line_no;
      ++lines;
      std::string_view trimmed(line);
      if (!trimmed.empty() && trimmed.back() == '\r') trimmed.remove_suffix(1);
      if (trimmed.empty()) {
        // Blank lines are tolerated only at the very end of the file.
        t.blank_lines_.push_back(line_no);
        continue;
      }
      if (!t.blank_lines_.empty())
        throw IngestError("blank line inside table", t.blank_lines_.front());
      detail::split_line(line, options.delimiter, fields, count);
      if (!width) {
        width = count;
        if (options.has_header) {
          t.schema_ = Schema(std::vector<std::string>(fields.begin(), fields.begin() + count));
          continue;
        }
        t.schema_ = Schema::generated(count);
      }
      if (count != *width) {
        if (!options.skip_bad_rows)
          throw IngestError("expected " + std::to_string(*width) + " fields, found " +
                                std::to_string(count),
                            line_no);
        ++skipped;
        continue;
      }
      ++rows;
    }
    if (in.bad()) throw IngestError("read error in '" + path + "'", line_no);
    if (lines == 0 || !width) throw IngestError("empty file '" + path + "'");
    t.rows_ = rows;
    t.skipped_ = skipped;
    t.blank_lines_.clear();
    return t;
  }

  /// In-memory table; `cells` holds rows back to back, dimension_count per row.
  static FactTable from_cells(Schema schema, std::vector<std::string> cells) {
    if (schema.dimension_count() == 0) throw IngestError("schema must have at least one dimension");
    if (cells.size() % schema.dimension_count() != 0)
      throw IngestError("cell count is not a multiple of the dimension count");
    FactTable t;
    t.rows_ = cells.size() / schema.dimension_count();
    t.schema_ = std::move(schema);
    t.cells_ = std::make_shared<const std::vector<std::string>>(std::move(cells));
    return t;
  }

  static FactTable from_rows(const std::vector<std::vector<std::string>>& rows,
                             std::optional<Schema> schema = std::nullopt) {
    if (!schema) {
      if (rows.empty()) throw IngestError("cannot infer schema from zero rows");
      schema = Schema::generated(rows.front().size());
    }
    std::vector<std::string> cells;
    cells.reserve(rows.size() * schema->dimension_count());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != schema->dimension_count())
        throw IngestError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                          " values, expected " + std::to_string(schema->dimension_count()));
      cells.insert(cells.end(), rows[i].begin(), rows[i].end());
    }
    return from_cells(std::move(*schema), std::move(cells));
  }

  const Schema& schema() const noexcept { return schema_; }
  std::size_t row_count() const noexcept { return rows_; }
  std::size_t skipped_rows() const noexcept { return skipped_; }
  bool in_memory() const noexcept { return cells_ != nullptr; }
  const std::string& path() const noexcept { return path_; }
  const TableOptions& options() const noexcept { return options_; }

  /// Random access, in-memory tables only.
  Row row(std::size_t i) const {
    if (!cells_) throw std::logic_error("random row access requires an in-memory table");
    const std::size_t d = schema_.dimension_count();
    return Row(cells_->data() + i * d, d);
  }

  RowCursor scan() const { return RowCursor(*this); }

  template <class F>
  void for_each_row(F&& f) const {
    if (cells_) {
      for (std::size_t i = 0; i < rows_; ++i) f(row(i));
      return;
    }
    RowCursor c = scan();
    while (c.next()) f(c.row());
  }

  /// Writes the table as delimited text (no quoting).
  void write(std::ostream& out, char delimiter, bool header) const {
    auto emit = [&](Row r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) out << delimiter;
        out << r[i];
      }
      out << '\n';
    };
    if (header) emit(Row(schema_.dimension_names()));
    for_each_row(emit);
  }

 private:
  friend class RowCursor;
  FactTable() = default;

  Schema schema_;
  std::size_t rows_ = 0;
  std::size_t skipped_ = 0;
  std::string path_;
  TableOptions options_;
  std::vector<std::size_t> blank_lines_;
  std::shared_ptr<const std::vector<std::string>> cells_;
};

inline RowCursor::RowCursor(const FactTable& table) : table_(&table) {
  if (!table.in_memory()) {
    in_ = std::make_unique<std::ifstream>(table.path_, std::ios::binary);
    if (!*in_) throw IngestError("cannot reopen '" + table.path_ + "'");
    if (table.options_.has_header) {
      std::getline(*in_, line_);
      ++line_no_;
    }
  }
}

inline bool RowCursor::next() {
  if (table_->in_memory()) {
    if (index_ >= table_->rows_) return false;
    current_ = table_->row(index_++);
    return true;
  }
  const std::size_t width = table_->schema_.dimension_count();
  while (std::getline(*in_, line_)) {
    ++line_no_;
    if (line_.empty() || line_ == "\r") continue;
    std::size_t count = 0;
    detail::split_line(line_, table_->options_.delimiter, fields_, count);
    if (count != width) {
      if (table_->options_.skip_bad_rows) continue;
      throw IngestError("expected " + std::to_string(width) + " fields, found " +
                            std::to_string(count),
                        line_no_);
    }
    current_ = Row(fields_.data(), width);
    ++index_;
    return true;
  }
  if (in_->bad()) throw IngestError("read error in '" + table_->path_ + "'", line_no_);
  if (index_ != table_->rows_)
    throw IngestError("table '" + table_->path_ + "' changed between scans", line_no_);
  return false;
}

}  // namespace viewsize
