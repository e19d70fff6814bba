#include <cmath>

#include "statz/error.hpp"
#include "statz/stats/descriptive.hpp"
#include "statz/stats/distributions.hpp"
#include "statz/stats/tests.hpp"
#include "validate.hpp"

namespace statz::stats {

namespace {

double sum_squares(std::span<const double> x, double center) {
  double ss = 0.0;
  for (double v : x) ss += (v - center) * (v - center);
  return ss;
}

}  // namespace

TestResult t_test_one_sample(std::span<const double> a, double mu0, const TTestOptions& o) {
  detail::require_size(a, 2, "one-sample t test");
  detail::require_finite(a, "one-sample t test");
  if (!std::isfinite(mu0)) throw InvalidInput("one-sample t test: reference mean must be finite");
  const double n = static_cast<double>(a.size());
  const double m = mean(a);
  const double var = variance(a);
  if (!(var > 0.0)) throw DegenerateInput("one-sample t test: sample has zero variance");
  const double t = (m - mu0) / std::sqrt(var / n);
  const double df = n - 1.0;
  return make_result("one_sample_t", t, DegreesOfFreedom{df, {}}, student_t_two_sided(t, df), o.alpha);
}

TestResult t_test_independent(std::span<const double> a, std::span<const double> b,
                              const TTestOptions& o) {
  detail::require_size(a, 2, "independent t test (first sample)");
  detail::require_size(b, 2, "independent t test (second sample)");
  detail::require_finite(a, "independent t test");
  detail::require_finite(b, "independent t test");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean(a);
  const double mb = mean(b);
  const double va = variance(a);
  const double vb = variance(b);
  if (!(va > 0.0) && !(vb > 0.0)) throw DegenerateInput("independent t test: both samples have zero variance");

  if (o.equal_var) {
    const double df = na + nb - 2.0;
    const double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / df;
    const double t = (ma - mb) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    return make_result("pooled_t", t, DegreesOfFreedom{df, {}}, student_t_two_sided(t, df), o.alpha);
  }
  const double sa = va / na;
  const double sb = vb / nb;
  const double t = (ma - mb) / std::sqrt(sa + sb);
  const double df = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  return make_result("welch_t", t, DegreesOfFreedom{df, {}}, student_t_two_sided(t, df), o.alpha);
}

TestResult t_test_paired(std::span<const double> a, std::span<const double> b, const TTestOptions& o) {
  if (a.size() != b.size()) throw InvalidInput("paired t test: samples differ in length");
  detail::require_size(a, 2, "paired t test");
  detail::require_finite(a, "paired t test");
  detail::require_finite(b, "paired t test");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  if (!(variance(d) > 0.0)) throw DegenerateInput("paired t test: differences have zero variance");
  auto r = t_test_one_sample(d, 0.0, o);
  r.method = "paired_t";
  return r;
}

TestResult t_test(TTestKind kind, std::span<const double> a, SampleOrMean b_or_mu, const TTestOptions& o) {
  if (kind == TTestKind::one_sample) {
    const double* mu = std::get_if<double>(&b_or_mu);
    if (!mu) throw InvalidInput("one-sample t test needs a reference mean");
    return t_test_one_sample(a, *mu, o);
  }
  const auto* b = std::get_if<std::span<const double>>(&b_or_mu);
  if (!b) throw InvalidInput("two-sample t test needs a second sample");
  return kind == TTestKind::paired ? t_test_paired(a, *b, o) : t_test_independent(a, *b, o);
}

TestResult one_way_anova(const Groups& groups, double alpha) {
  if (groups.size() < 2) throw InvalidInput("one-way ANOVA needs at least two groups");
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& g : groups) {
    detail::require_size(g, 2, "one-way ANOVA group");
    detail::require_finite(g, "one-way ANOVA");
    for (double v : g) total += v;
    n += g.size();
  }
  const double k = static_cast<double>(groups.size());
  const double df_within = static_cast<double>(n) - k;
  if (df_within < 1.0) throw TooFewObservations(groups.size() + 1, n, "one-way ANOVA");
  std::vector<double> all;
  all.reserve(n);
  for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
  const double grand = mean(all);

  double ss_between = 0.0;
  double ss_within = 0.0;
  for (const auto& g : groups) {
    const double m = mean(g);
    ss_between += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    ss_within += sum_squares(g, m);
  }
  if (!(ss_within > 0.0)) throw DegenerateInput("one-way ANOVA: every group has zero variance");
  const double df_between = k - 1.0;
  const double f = (ss_between / df_between) / (ss_within / df_within);
  return make_result("one_way_anova", f, DegreesOfFreedom{df_between, df_within},
                     f_sf(f, df_between, df_within), alpha);
}

TestResult levene(const Groups& groups, double alpha) {
  if (groups.size() < 2) throw InvalidInput("Levene's test needs at least two groups");
  Groups deviations;
  deviations.reserve(groups.size());
  for (const auto& g : groups) {
    detail::require_size(g, 2, "Levene's test group");
    detail::require_finite(g, "Levene's test");
    const double med = median(g);
    std::vector<double> d(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) d[i] = std::fabs(g[i] - med);
    deviations.push_back(std::move(d));
  }
  try {
    auto r = one_way_anova(deviations, alpha);
    r.method = "levene";
    return r;
  } catch (const DegenerateInput&) {
    throw DegenerateInput("Levene's test: no group has spread around its median");
  }
}

}  // namespace statz::stats
