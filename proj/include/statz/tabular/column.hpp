#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace statz::tabular {

enum class ColumnKind { numeric, categorical, text };

const char* to_string(ColumnKind kind) noexcept;

/// A named, typed column with an explicit missing-value mask.
///
/// Numeric columns keep a NaN in every missing slot so that `numbers()` can be
/// handed to code that wants a contiguous view; the mask stays authoritative.
/// Non-missing numeric cells are always finite.
class Column {
 public:
  static Column numeric(std::string name, std::vector<double> values,
                        std::vector<bool> missing = {});
  /// NaN marks a missing cell.
  static Column numeric_from_nan(std::string name, std::vector<double> values);
  static Column categorical(std::string name, std::vector<std::string> values,
                            std::vector<bool> missing = {});
  static Column text(std::string name, std::vector<std::string> values,
                     std::vector<bool> missing = {});

  const std::string& name() const noexcept { return name_; }
  ColumnKind kind() const noexcept { return kind_; }
  bool is_numeric() const noexcept { return kind_ == ColumnKind::numeric; }
  std::size_t size() const noexcept { return missing_.size(); }

  bool is_missing(std::size_t row) const { return missing_.at(row); }
  const std::vector<bool>& missing_mask() const noexcept { return missing_; }
  std::size_t missing_count() const noexcept;

  /// Numeric view; missing slots hold NaN. Throws InvalidInput for non-numeric columns.
  std::span<const double> numbers() const;
  double number(std::size_t row) const;
  /// Non-missing numeric values in row order.
  std::vector<double> present() const;

  /// Label of a categorical/text cell ("" when missing).
  const std::string& label(std::size_t row) const;
  std::span<const std::string> labels() const;
  /// Distinct non-missing labels in first-seen order.
  std::vector<std::string> levels() const;

  Column renamed(std::string name) const;
  /// Rows picked by index, in the given order.
  Column take(std::span<const std::size_t> rows) const;

  friend bool operator==(const Column& a, const Column& b);

 private:
  Column(std::string name, ColumnKind kind, std::vector<double> numbers,
         std::vector<std::string> labels, std::vector<bool> missing);

  std::string name_;
  ColumnKind kind_ = ColumnKind::numeric;
  std::vector<double> numbers_;
  std::vector<std::string> labels_;
  std::vector<bool> missing_;
};

}  // namespace statz::tabular
