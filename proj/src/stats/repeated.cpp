#include "statz/stats/repeated.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "statz/error.hpp"
#include "statz/stats/distributions.hpp"

namespace statz::stats {

namespace {

void require_complete(const Matrix& m, const char* context) {
  if (m.rows() < 2) throw TooFewObservations(2, m.rows(), std::string(context) + " (subjects)");
  if (m.cols() < 2) throw TooFewObservations(2, m.cols(), std::string(context) + " (treatments)");
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (double v : m.row(r)) {
      if (std::isnan(v)) throw InvalidInput(std::string(context) + ": matrix has a missing cell in row " + std::to_string(r + 1));
      if (!std::isfinite(v)) throw InvalidInput(std::string(context) + ": matrix has a non-finite cell in row " + std::to_string(r + 1));
    }
  }
}

// Column sums of doubled within-row average ranks. Doubling keeps tied
// ranks integral, so the sums are exact.
std::vector<std::int64_t> doubled_rank_sums(const Matrix& m) {
  const std::size_t k = m.cols();
  std::vector<std::int64_t> sums(k, 0);
  std::vector<std::size_t> order(k);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return row[a] < row[b]; });
    std::size_t i = 0;
    while (i < k) {
      std::size_t j = i;
      while (j + 1 < k && row[order[j + 1]] == row[order[i]]) ++j;
      const auto doubled = static_cast<std::int64_t>(i + j + 2);
      for (std::size_t t = i; t <= j; ++t) sums[order[t]] += doubled;
      i = j + 1;
    }
  }
  return sums;
}

struct Concordance {
  double w;
  double n;
  double k;
};

// W = 12 S / (N^2 (k^3 - k)) written over integers:
//   W = 3 (sum D_j^2 - N^2 k (k+1)^2) / (N^2 k (k+1) (k-1)),  D_j doubled rank sums.
Concordance concordance(const Matrix& m) {
  const auto sums = doubled_rank_sums(m);
  const auto n = static_cast<std::int64_t>(m.rows());
  const auto k = static_cast<std::int64_t>(m.cols());
  std::int64_t sum_sq = 0;
  for (auto d : sums) sum_sq += d * d;
  const std::int64_t numerator = 3 * (sum_sq - n * n * k * (k + 1) * (k + 1));
  const std::int64_t denominator = n * n * k * (k + 1) * (k - 1);
  constexpr std::int64_t exact_limit = std::int64_t{1} << 53;
  if (std::llabs(numerator) > exact_limit || denominator > exact_limit) {
    throw UnsupportedSize("Friedman: matrix too large for exact rank arithmetic");
  }
  const double w = std::clamp(static_cast<double>(numerator) / static_cast<double>(denominator), 0.0, 1.0);
  return {w, static_cast<double>(n), static_cast<double>(k)};
}

}  // namespace

TestResult friedman(const Matrix& m, double alpha) {
  require_complete(m, "Friedman test");
  const auto c = concordance(m);
  const double statistic = c.w * c.n * (c.k - 1.0);
  const double df = c.k - 1.0;
  return make_result("friedman", statistic, DegreesOfFreedom{df, {}}, chi2_sf(statistic, df), alpha);
}

double kendalls_w(const Matrix& m) {
  require_complete(m, "Kendall's W");
  return concordance(m).w;
}

std::vector<double> mean_ranks(const Matrix& m) {
  require_complete(m, "mean ranks");
  const auto sums = doubled_rank_sums(m);
  std::vector<double> out(sums.size());
  for (std::size_t j = 0; j < sums.size(); ++j)
    out[j] = static_cast<double>(sums[j]) / (2.0 * static_cast<double>(m.rows()));
  return out;
}

PosthocMatrix nemenyi(const Matrix& m) {
  require_complete(m, "Nemenyi test");
  const auto ranks = mean_ranks(m);
  const std::size_t k = m.cols();
  const double kd = static_cast<double>(k);
  const double scale = std::sqrt(kd * (kd + 1.0) / (6.0 * static_cast<double>(m.rows())));
  PosthocMatrix out;
  out.labels = m.labels();
  out.p_values.assign(k, std::vector<double>(k, 1.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double q = std::fabs(ranks[i] - ranks[j]) / scale * std::sqrt(2.0);
      const double p = std::clamp(studentized_range_sf(q, static_cast<int>(k)), 0.0, 1.0);
      out.p_values[i][j] = p;
      out.p_values[j][i] = p;
    }
  }
  return out;
}

std::vector<double> p_adjust_bonferroni(std::span<const double> p, std::size_t m) {
  if (m < p.size()) throw InvalidInput("Bonferroni: m must be at least the number of p-values");
  std::vector<double> out;
  out.reserve(p.size());
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("Bonferroni: p-values must lie in [0, 1]");
    out.push_back(std::min(1.0, v * static_cast<double>(m)));
  }
  return out;
}

double fleiss_kappa(const Matrix& counts, int raters_per_item) {
  if (raters_per_item < 2) throw InvalidInput("Fleiss' kappa needs at least two raters per item");
  if (counts.rows() < 2) throw TooFewObservations(2, counts.rows(), "Fleiss' kappa (items)");
  const double n = raters_per_item;
  const double items = static_cast<double>(counts.rows());
  std::vector<double> category_totals(counts.cols(), 0.0);
  double agreement = 0.0;
  for (std::size_t i = 0; i < counts.rows(); ++i) {
    double row_sum = 0.0, row_sq = 0.0;
    for (std::size_t j = 0; j < counts.cols(); ++j) {
      const double c = counts(i, j);
      if (!(c >= 0.0) || c != std::floor(c)) throw InvalidInput("Fleiss' kappa: counts must be non-negative integers");
      row_sum += c;
      row_sq += c * c;
      category_totals[j] += c;
    }
    if (row_sum != n) {
      throw InvalidInput("Fleiss' kappa: item " + std::to_string(i + 1) + " has " +
                         std::to_string(static_cast<long long>(row_sum)) + " ratings, expected " +
                         std::to_string(raters_per_item));
    }
    agreement += (row_sq - n) / (n * (n - 1.0));
  }
  const double p_bar = agreement / items;
  double p_e = 0.0;
  for (double t : category_totals) {
    const double share = t / (items * n);
    p_e += share * share;
  }
  if (!(p_e < 1.0)) throw DegenerateInput("Fleiss' kappa: all ratings fall in one category");
  return (p_bar - p_e) / (1.0 - p_e);
}

}  // namespace statz::stats
