#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "statz/tabular/dataset.hpp"

namespace statz::preprocess {

struct ForestParams {
  std::size_t n_trees = 100;
  std::size_t subsample = 256;  // capped at n
  double contamination = 0.05;  // fraction removed by remove_outliers, in (0, 0.5)
  std::uint64_t seed = 42;
};

/// Average path length of an unsuccessful BST search among m points:
/// 2 H(m - 1) - 2 (m - 1) / m with H(i) ~ ln(i) + Euler's constant;
/// c(2) = 1 and c(m <= 1) = 0.
double average_path_length(double m);

/// Isolation forest over dense row-major points.
class IsolationForest {
 public:
  /// `points` holds n rows of `dims` values each.
  static IsolationForest fit(std::span<const double> points, std::size_t dims, const ForestParams& params);

  /// s(x, psi) = 2^(-E[h(x)] / c(psi)), in (0, 1).
  double score(std::span<const double> point) const;
  double expected_path_length(std::span<const double> point) const;
  std::size_t sample_size() const noexcept { return sample_size_; }

 private:
  struct Node {
    int feature = -1;  // -1 marks an external node
    double split = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t size = 0;
  };
  using Tree = std::vector<Node>;

  double path_length(const Tree& tree, std::span<const double> point) const;

  std::vector<Tree> trees_;
  std::size_t dims_ = 0;
  std::size_t sample_size_ = 0;
};

/// Scores each row of the selected numeric columns (empty list = all numeric
/// columns). Missing cells are rejected: impute first.
std::vector<double> isolation_forest_scores(const tabular::Dataset& d, std::span<const std::string> columns,
                                            const ForestParams& params);

/// Number of rows remove_outliers drops: ceil(contamination * n).
std::size_t outlier_count(std::size_t n, double contamination);

/// Drops the ceil(contamination * n) highest-scoring rows. Among equal
/// scores the lower row index is kept.
tabular::Dataset remove_outliers(const tabular::Dataset& d, std::span<const std::string> columns,
                                 const ForestParams& params);

}  // namespace statz::preprocess
