#pragma once

#include <span>
#include <vector>

#include "statz/stats/matrix.hpp"
#include "statz/stats/result.hpp"

namespace statz::stats {

/// Friedman rank test on an N subjects x k treatments matrix.
///
/// Ranks are averaged within rows for ties, without the tie-correction
/// divisor. The statistic is computed from Kendall's W so that
/// kendalls_w(m) * N * (k - 1) == friedman(m).statistic holds bit for bit.
TestResult friedman(const Matrix& m, double alpha = kDefaultAlpha);

/// Kendall's coefficient of concordance, chi2_F / (N (k - 1)), in [0, 1].
double kendalls_w(const Matrix& m);

/// Nemenyi all-pairs comparison of mean within-row ranks. Differences are
/// scaled by sqrt(k (k + 1) / (6 N)), multiplied by sqrt(2) to put them on
/// the studentized-range scale, and referred to the range distribution
/// with infinite df.
PosthocMatrix nemenyi(const Matrix& m);

/// min(1, p * m) for each p.
std::vector<double> p_adjust_bonferroni(std::span<const double> p, std::size_t m);

/// Fleiss' kappa for an items x categories table of rating counts.
double fleiss_kappa(const Matrix& counts, int raters_per_item);

/// Mean within-row ranks per column (average ranks for ties).
std::vector<double> mean_ranks(const Matrix& m);

}  // namespace statz::stats
