#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace statz::stats {

/// Dense row-major matrix of measurements: rows are subjects (or items),
/// columns treatments (or categories). NaN marks a missing cell.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data,
         std::vector<std::string> labels = {});

  static Matrix from_rows(const std::vector<std::vector<double>>& rows,
                          std::vector<std::string> labels = {});
  static Matrix from_columns(const std::vector<std::vector<double>>& columns,
                             std::vector<std::string> labels = {});

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }
  std::vector<double> column(std::size_t c) const;
  /// Column labels; defaults to "1".."k".
  const std::vector<std::string>& labels() const noexcept { return labels_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
  std::vector<std::string> labels_;
};

}  // namespace statz::stats
