#pragma once

#include <span>
#include <variant>
#include <vector>

#include "statz/stats/result.hpp"
#include "statz/tabular/column.hpp"

namespace statz::stats {

using Groups = std::vector<std::vector<double>>;

enum class TTestKind { one_sample, independent, paired };

struct TTestOptions {
  bool equal_var = false;  // Welch unless set
  double alpha = kDefaultAlpha;
};

using SampleOrMean = std::variant<std::span<const double>, double>;

/// Dispatches on `kind`: one_sample takes a reference mean, the others a
/// second sample.
TestResult t_test(TTestKind kind, std::span<const double> a, SampleOrMean b_or_mu,
                  const TTestOptions& o = {});
/// Two-sided one-sample t test of mean(a) == mu0.
TestResult t_test_one_sample(std::span<const double> a, double mu0, const TTestOptions& o = {});
/// Two-sided independent-samples t test (Welch by default, pooled with equal_var).
TestResult t_test_independent(std::span<const double> a, std::span<const double> b,
                              const TTestOptions& o = {});
/// Two-sided paired t test on a - b.
TestResult t_test_paired(std::span<const double> a, std::span<const double> b,
                         const TTestOptions& o = {});

enum class NonparametricKind { mann_whitney, wilcoxon_signed, kruskal_wallis };

enum class PValueMethod { automatic, exact, asymptotic };

struct NonparametricOptions {
  double alpha = kDefaultAlpha;
  /// Mann-Whitney: automatic is exact when n_a + n_b <= 16. Wilcoxon:
  /// automatic is exact when there are no tied |d| and at most 50 non-zero
  /// differences. Ignored by Kruskal-Wallis.
  PValueMethod method = PValueMethod::automatic;
};

/// Mann-Whitney U, Wilcoxon signed-rank (zero differences dropped) or
/// Kruskal-Wallis H (tie-corrected, chi-square with k - 1 df).
TestResult nonparametric_test(NonparametricKind kind, const Groups& groups,
                              const NonparametricOptions& o = {});
TestResult mann_whitney(std::span<const double> a, std::span<const double> b,
                        const NonparametricOptions& o = {});
TestResult wilcoxon_signed(std::span<const double> a, std::span<const double> b,
                           const NonparametricOptions& o = {});
TestResult kruskal_wallis(const Groups& groups, const NonparametricOptions& o = {});

TestResult one_way_anova(const Groups& groups, double alpha = kDefaultAlpha);
/// Brown-Forsythe variant: ANOVA on absolute deviations from group medians.
TestResult levene(const Groups& groups, double alpha = kDefaultAlpha);

/// Royston's AS R94 algorithm; 3 <= n <= 5000.
TestResult shapiro_wilk(std::span<const double> x, double alpha = kDefaultAlpha);

/// Pearson, or Pearson on average ranks for Spearman; p from
/// t = r sqrt((n - 2) / (1 - r^2)) with n - 2 df.
CorrelationResult correlation(CorrelationMethod method, std::span<const double> a,
                              std::span<const double> b, double alpha = kDefaultAlpha);
/// Pairwise-complete filtering of missing cells before correlating.
CorrelationResult correlation(CorrelationMethod method, const tabular::Column& a,
                              const tabular::Column& b, double alpha = kDefaultAlpha);

/// Rows where both cells are present.
std::pair<std::vector<double>, std::vector<double>> complete_pairs(const tabular::Column& a,
                                                                   const tabular::Column& b);

}  // namespace statz::stats
