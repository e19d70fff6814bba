#include "statz/stats/matrix.hpp"

#include "statz/error.hpp"

namespace statz::stats {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data,
               std::vector<std::string> labels)
    : rows_(rows), cols_(cols), data_(std::move(data)), labels_(std::move(labels)) {
  if (data_.size() != rows_ * cols_) throw InvalidInput("matrix data does not match its shape");
  if (labels_.empty()) {
    for (std::size_t c = 0; c < cols_; ++c) labels_.push_back(std::to_string(c + 1));
  } else if (labels_.size() != cols_) {
    throw InvalidInput("matrix needs one label per column");
  }
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows, std::vector<std::string> labels) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw InvalidInput("matrix rows differ in length");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(data), std::move(labels));
}

Matrix Matrix::from_columns(const std::vector<std::vector<double>>& columns,
                            std::vector<std::string> labels) {
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  std::vector<double> data(rows * columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw InvalidInput("matrix columns differ in length");
    for (std::size_t r = 0; r < rows; ++r) data[r * columns.size() + c] = columns[c][r];
  }
  return Matrix(rows, columns.size(), std::move(data), std::move(labels));
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

}  // namespace statz::stats
