#include "statz/tabular/column.hpp"

#include <cmath>
#include <limits>
#include <unordered_set>

#include "statz/error.hpp"

namespace statz::tabular {

const char* to_string(ColumnKind kind) noexcept {
  switch (kind) {
    case ColumnKind::numeric: return "numeric";
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::text: return "text";
  }
  return "text";
}

namespace {

std::vector<bool> mask_or_default(std::vector<bool> missing, std::size_t n, const std::string& name) {
  if (missing.empty()) return std::vector<bool>(n, false);
  if (missing.size() != n) {
    throw InvalidInput("column '" + name + "': missing mask length " +
                       std::to_string(missing.size()) + " != value count " + std::to_string(n));
  }
  return missing;
}

}  // namespace

Column::Column(std::string name, ColumnKind kind, std::vector<double> numbers,
               std::vector<std::string> labels, std::vector<bool> missing)
    : name_(std::move(name)),
      kind_(kind),
      numbers_(std::move(numbers)),
      labels_(std::move(labels)),
      missing_(std::move(missing)) {}

Column Column::numeric(std::string name, std::vector<double> values, std::vector<bool> missing) {
  auto mask = mask_or_default(std::move(missing), values.size(), name);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (mask[i]) {
      values[i] = std::numeric_limits<double>::quiet_NaN();
    } else if (!std::isfinite(values[i])) {
      throw InvalidInput("column '" + name + "': non-finite value at row " + std::to_string(i));
    }
  }
  return Column(std::move(name), ColumnKind::numeric, std::move(values), {}, std::move(mask));
}

Column Column::numeric_from_nan(std::string name, std::vector<double> values) {
  std::vector<bool> mask(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) mask[i] = std::isnan(values[i]);
  return numeric(std::move(name), std::move(values), std::move(mask));
}

Column Column::categorical(std::string name, std::vector<std::string> values,
                           std::vector<bool> missing) {
  auto mask = mask_or_default(std::move(missing), values.size(), name);
  for (std::size_t i = 0; i < values.size(); ++i)
    if (mask[i]) values[i].clear();
  return Column(std::move(name), ColumnKind::categorical, {}, std::move(values), std::move(mask));
}

Column Column::text(std::string name, std::vector<std::string> values, std::vector<bool> missing) {
  auto mask = mask_or_default(std::move(missing), values.size(), name);
  for (std::size_t i = 0; i < values.size(); ++i)
    if (mask[i]) values[i].clear();
  return Column(std::move(name), ColumnKind::text, {}, std::move(values), std::move(mask));
}

std::size_t Column::missing_count() const noexcept {
  std::size_t n = 0;
  for (bool m : missing_) n += m ? 1 : 0;
  return n;
}

std::span<const double> Column::numbers() const {
  if (!is_numeric()) throw InvalidInput("column '" + name_ + "' is not numeric");
  return numbers_;
}

double Column::number(std::size_t row) const { return numbers()[row]; }

std::vector<double> Column::present() const {
  auto values = numbers();
  std::vector<double> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!missing_[i]) out.push_back(values[i]);
  return out;
}

const std::string& Column::label(std::size_t row) const {
  if (is_numeric()) throw InvalidInput("column '" + name_ + "' is numeric");
  return labels_.at(row);
}

std::span<const std::string> Column::labels() const {
  if (is_numeric()) throw InvalidInput("column '" + name_ + "' is numeric");
  return labels_;
}

std::vector<std::string> Column::levels() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (missing_[i]) continue;
    if (seen.insert(labels_[i]).second) out.push_back(labels_[i]);
  }
  return out;
}

Column Column::renamed(std::string name) const {
  Column out = *this;
  out.name_ = std::move(name);
  return out;
}

Column Column::take(std::span<const std::size_t> rows) const {
  std::vector<bool> mask;
  mask.reserve(rows.size());
  for (auto r : rows) mask.push_back(missing_.at(r));
  if (is_numeric()) {
    std::vector<double> values;
    values.reserve(rows.size());
    for (auto r : rows) values.push_back(numbers_[r]);
    return Column(name_, kind_, std::move(values), {}, std::move(mask));
  }
  std::vector<std::string> values;
  values.reserve(rows.size());
  for (auto r : rows) values.push_back(labels_[r]);
  return Column(name_, kind_, {}, std::move(values), std::move(mask));
}

bool operator==(const Column& a, const Column& b) {
  if (a.name_ != b.name_ || a.kind_ != b.kind_ || a.missing_ != b.missing_) return false;
  if (!a.is_numeric()) return a.labels_ == b.labels_;
  for (std::size_t i = 0; i < a.numbers_.size(); ++i) {
    if (!a.missing_[i] && a.numbers_[i] != b.numbers_[i]) return false;
  }
  return true;
}

}  // namespace statz::tabular
