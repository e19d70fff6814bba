#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "statz/tabular/column.hpp"

namespace statz::tabular {

/// Ordered collection of equal-length, uniquely named columns.
///
/// Datasets are values: every transformation returns a new Dataset and leaves
/// its input untouched.
class Dataset {
 public:
  Dataset() = default;
  /// Throws SchemaError on ragged columns, empty names or duplicate names.
  explicit Dataset(std::vector<Column> columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return columns_.size(); }
  bool empty() const noexcept { return columns_.empty(); }

  const std::vector<Column>& columns() const noexcept { return columns_; }
  std::vector<std::string> names() const;
  std::optional<std::size_t> index_of(std::string_view name) const;

  /// Exact-name lookup; a miss throws UnknownColumn carrying up to three
  /// closest names by edit distance.
  const Column& column(std::string_view name) const;

  /// Replaces the column with the same name, or appends it.
  Dataset with_column(Column column) const;
  Dataset select_rows(std::span<const std::size_t> rows) const;
  Dataset select_columns(std::span<const std::string> names) const;

  friend bool operator==(const Dataset& a, const Dataset& b) = default;

 private:
  std::vector<Column> columns_;
  std::size_t rows_ = 0;
};

/// Free-function form of Dataset::column.
const Column& column(const Dataset& d, std::string_view name);

/// Levenshtein distance, case-insensitive on ASCII.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// Up to `limit` candidates closest to `name`, nearest first, ties in
/// candidate order. Candidates further than max(2, |name|/2) are dropped.
std::vector<std::string> closest_names(std::string_view name,
                                       std::span<const std::string> candidates,
                                       std::size_t limit = 3);

}  // namespace statz::tabular
