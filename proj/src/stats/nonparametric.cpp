#include <algorithm>
#include <cmath>
#include <cstdint>

#include "statz/error.hpp"
#include "statz/stats/distributions.hpp"
#include "statz/stats/ranks.hpp"
#include "statz/stats/tests.hpp"
#include "validate.hpp"

namespace statz::stats {

namespace {

constexpr std::size_t kMannWhitneyExactLimit = 16;
constexpr std::size_t kWilcoxonExactLimit = 50;

double two_sided_from_tails(double lower, double upper) {
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

// Exact permutation distribution of the doubled rank sum of the first sample:
// ways[j][s] counts size-j subsets of the pooled observations whose doubled
// ranks sum to s. Doubled average ranks are integers, so ties are exact.
double mann_whitney_exact_p(std::span<const double> ranks, std::size_t na, std::int64_t observed2) {
  std::vector<std::int64_t> doubled(ranks.size());
  std::int64_t total = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    doubled[i] = std::llround(2.0 * ranks[i]);
    total += doubled[i];
  }
  const auto width = static_cast<std::size_t>(total + 1);
  std::vector<std::vector<double>> ways(na + 1, std::vector<double>(width, 0.0));
  ways[0][0] = 1.0;
  for (std::size_t i = 0; i < doubled.size(); ++i) {
    const auto r = static_cast<std::size_t>(doubled[i]);
    for (std::size_t j = std::min(na, i + 1); j >= 1; --j) {
      for (std::size_t s = width; s-- > r;) ways[j][s] += ways[j - 1][s - r];
    }
  }
  double count = 0.0, lower = 0.0, upper = 0.0;
  for (std::size_t s = 0; s < width; ++s) {
    const double w = ways[na][s];
    count += w;
    if (static_cast<std::int64_t>(s) <= observed2) lower += w;
    if (static_cast<std::int64_t>(s) >= observed2) upper += w;
  }
  return two_sided_from_tails(lower / count, upper / count);
}

// Distribution of W+ for n untied ranks 1..n.
double wilcoxon_exact_p(std::size_t n, double w_plus) {
  const std::size_t max_sum = n * (n + 1) / 2;
  std::vector<double> ways(max_sum + 1, 0.0);
  ways[0] = 1.0;
  for (std::size_t r = 1; r <= n; ++r)
    for (std::size_t s = max_sum; s >= r; --s) ways[s] += ways[s - r];
  const double total = std::ldexp(1.0, static_cast<int>(n));
  const auto lo = static_cast<std::size_t>(std::ceil(w_plus));
  const auto hi = static_cast<std::size_t>(std::floor(w_plus));
  double lower = 0.0, upper = 0.0;
  for (std::size_t s = 0; s <= max_sum; ++s) {
    if (s <= lo) lower += ways[s];
    if (s >= hi) upper += ways[s];
  }
  return two_sided_from_tails(lower / total, upper / total);
}

// Two-sided normal approximation with continuity correction.
double normal_two_sided(double deviation, double sd) {
  const double z = std::max(0.0, std::fabs(deviation) - 0.5) / sd;
  return std::min(1.0, 2.0 * normal_sf(z));
}

}  // namespace

TestResult mann_whitney(std::span<const double> a, std::span<const double> b, const NonparametricOptions& o) {
  detail::require_size(a, 1, "Mann-Whitney U (first sample)");
  detail::require_size(b, 1, "Mann-Whitney U (second sample)");
  detail::require_finite(a, "Mann-Whitney U");
  detail::require_finite(b, "Mann-Whitney U");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = average_ranks(pooled);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double rank_sum_a = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) rank_sum_a += ranks[i];
  const double u_a = rank_sum_a - na * (na + 1.0) / 2.0;
  const double u_b = na * nb - u_a;
  const double u = std::min(u_a, u_b);

  const bool exact = o.method == PValueMethod::exact ||
                     (o.method == PValueMethod::automatic && pooled.size() <= kMannWhitneyExactLimit);
  double p;
  if (exact) {
    p = mann_whitney_exact_p(ranks, a.size(), std::llround(2.0 * rank_sum_a));
  } else {
    const double n = na + nb;
    const double var = na * nb / 12.0 * ((n + 1.0) - tie_term(pooled) / (n * (n - 1.0)));
    if (!(var > 0.0)) {
      p = 1.0;
    } else {
      p = normal_two_sided(u_a - na * nb / 2.0, std::sqrt(var));
    }
  }
  return make_result("mann_whitney", u, std::nullopt, p, o.alpha);
}

TestResult wilcoxon_signed(std::span<const double> a, std::span<const double> b, const NonparametricOptions& o) {
  if (a.size() != b.size()) throw InvalidInput("Wilcoxon signed-rank: samples differ in length");
  detail::require_size(a, 1, "Wilcoxon signed-rank");
  detail::require_finite(a, "Wilcoxon signed-rank");
  detail::require_finite(b, "Wilcoxon signed-rank");
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) d.push_back(a[i] - b[i]);
  if (d.empty()) throw DegenerateInput("Wilcoxon signed-rank: every difference is zero");

  std::vector<double> magnitude(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) magnitude[i] = std::fabs(d[i]);
  const auto ranks = average_ranks(magnitude);
  double w_plus = 0.0, w_minus = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) (d[i] > 0 ? w_plus : w_minus) += ranks[i];

  const double ties = tie_term(magnitude);
  const bool exact = o.method == PValueMethod::exact ||
                     (o.method == PValueMethod::automatic && ties == 0.0 && d.size() <= kWilcoxonExactLimit);
  const double n = static_cast<double>(d.size());
  double p;
  if (exact) {
    p = wilcoxon_exact_p(d.size(), w_plus);
  } else {
    const double var = (n * (n + 1.0) * (2.0 * n + 1.0) - ties / 2.0) / 24.0;
    p = var > 0.0 ? normal_two_sided(w_plus - n * (n + 1.0) / 4.0, std::sqrt(var)) : 1.0;
  }
  return make_result("wilcoxon_signed", std::min(w_plus, w_minus), std::nullopt, p, o.alpha);
}

TestResult kruskal_wallis(const Groups& groups, const NonparametricOptions& o) {
  if (groups.size() < 2) throw InvalidInput("Kruskal-Wallis needs at least two groups");
  std::vector<double> pooled;
  for (const auto& g : groups) {
    detail::require_size(g, 1, "Kruskal-Wallis group");
    detail::require_finite(g, "Kruskal-Wallis");
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  const double n = static_cast<double>(pooled.size());
  const auto ranks = average_ranks(pooled);
  double sum = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double r = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) r += ranks[offset + i];
    sum += r * r / static_cast<double>(g.size());
    offset += g.size();
  }
  const double correction = 1.0 - tie_term(pooled) / (n * n * n - n);
  if (!(correction > 0.0)) throw DegenerateInput("Kruskal-Wallis: every observation is tied");
  const double h = std::max(0.0, (12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / correction);
  const double df = static_cast<double>(groups.size() - 1);
  return make_result("kruskal_wallis", h, DegreesOfFreedom{df, {}}, chi2_sf(h, df), o.alpha);
}

TestResult nonparametric_test(NonparametricKind kind, const Groups& groups, const NonparametricOptions& o) {
  switch (kind) {
    case NonparametricKind::mann_whitney:
      if (groups.size() != 2) throw InvalidInput("Mann-Whitney U compares exactly two groups");
      return mann_whitney(groups[0], groups[1], o);
    case NonparametricKind::wilcoxon_signed:
      if (groups.size() != 2) throw InvalidInput("Wilcoxon signed-rank takes exactly two paired columns");
      return wilcoxon_signed(groups[0], groups[1], o);
    case NonparametricKind::kruskal_wallis:
      return kruskal_wallis(groups, o);
  }
  throw InvalidInput("unknown nonparametric test");
}

}  // namespace statz::stats
