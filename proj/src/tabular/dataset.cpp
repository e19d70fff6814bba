#include "statz/tabular/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <unordered_set>

#include "statz/error.hpp"

namespace statz::tabular {

Dataset::Dataset(std::vector<Column> columns) : columns_(std::move(columns)) {
  rows_ = columns_.empty() ? 0 : columns_.front().size();
  std::unordered_set<std::string> seen;
  for (const auto& c : columns_) {
    if (c.name().empty()) throw SchemaError("column names must be non-empty");
    if (!seen.insert(c.name()).second) throw SchemaError("duplicate column name '" + c.name() + "'");
    if (c.size() != rows_) {
      throw SchemaError("column '" + c.name() + "' has " + std::to_string(c.size()) +
                        " rows, expected " + std::to_string(rows_));
    }
  }
}

std::vector<std::string> Dataset::names() const {
  std::vector<std::string> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c.name());
  return out;
}

std::optional<std::size_t> Dataset::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name() == name) return i;
  return std::nullopt;
}

const Column& Dataset::column(std::string_view name) const {
  if (auto i = index_of(name)) return columns_[*i];
  auto all = names();
  throw UnknownColumn(std::string(name), closest_names(name, all));
}

Dataset Dataset::with_column(Column column) const {
  auto columns = columns_;
  if (auto i = index_of(column.name())) {
    columns[*i] = std::move(column);
  } else {
    columns.push_back(std::move(column));
  }
  return Dataset(std::move(columns));
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  for (auto r : rows) {
    if (r >= rows_) throw InvalidInput("row index " + std::to_string(r) + " out of range");
  }
  std::vector<Column> columns;
  columns.reserve(columns_.size());
  for (const auto& c : columns_) columns.push_back(c.take(rows));
  Dataset out(std::move(columns));
  out.rows_ = rows.size();
  return out;
}

Dataset Dataset::select_columns(std::span<const std::string> names) const {
  std::vector<Column> columns;
  columns.reserve(names.size());
  for (const auto& n : names) columns.push_back(column(n));
  return Dataset(std::move(columns));
}

const Column& column(const Dataset& d, std::string_view name) { return d.column(name); }

std::size_t edit_distance(std::string_view a, std::string_view b) {
  auto lower = [](char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); };
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t cost = lower(a[i - 1]) == lower(b[j - 1]) ? 0 : 1;
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<std::string> closest_names(std::string_view name,
                                       std::span<const std::string> candidates,
                                       std::size_t limit) {
  const std::size_t cutoff = std::max<std::size_t>(2, name.size() / 2);
  std::vector<std::pair<std::size_t, std::size_t>> scored;  // (distance, index)
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto d = edit_distance(name, candidates[i]);
    if (d <= cutoff) scored.emplace_back(d, i);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && out.size() < limit; ++i)
    out.push_back(candidates[scored[i].second]);
  return out;
}

}  // namespace statz::tabular
