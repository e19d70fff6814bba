#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "statz/tabular/dataset.hpp"

namespace statz::preprocess {

struct PcaResult {
  /// Columns PC1..PCk: centered data projected on the components.
  tabular::Dataset transformed;
  /// k x d loadings; rows orthonormal, largest-magnitude entry positive.
  std::vector<std::vector<double>> components;
  std::vector<double> explained_variance;        // top-k eigenvalues
  std::vector<double> explained_variance_ratio;  // eigenvalue / trace
  std::vector<double> means;                     // per input column
  std::vector<std::string> columns;              // input column names
  double total_variance = 0.0;                   // trace of the covariance
};

/// Principal components of the sample covariance (n - 1) of the selected
/// numeric columns (empty list = all numeric columns).
/// Requires 1 <= k <= |columns| <= n - 1 and no missing cells.
PcaResult pca(const tabular::Dataset& d, std::span<const std::string> columns, std::size_t k);

}  // namespace statz::preprocess
