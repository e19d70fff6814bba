#include <algorithm>
#include <cmath>

#include "statz/error.hpp"
#include "statz/stats/descriptive.hpp"
#include "statz/stats/distributions.hpp"
#include "statz/stats/ranks.hpp"
#include "statz/stats/tests.hpp"
#include "validate.hpp"

namespace statz::stats {

namespace {

double pearson_r(std::span<const double> a, std::span<const double> b) {
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) throw DegenerateInput("correlation: an input has zero variance");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace

CorrelationResult correlation(CorrelationMethod method, std::span<const double> a,
                              std::span<const double> b, double alpha) {
  if (a.size() != b.size()) throw InvalidInput("correlation: inputs differ in length");
  detail::require_size(a, 3, "correlation");
  detail::require_finite(a, "correlation");
  detail::require_finite(b, "correlation");
  double r;
  if (method == CorrelationMethod::spearman) {
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    r = pearson_r(ra, rb);
  } else {
    r = pearson_r(a, b);
  }
  const double df = static_cast<double>(a.size()) - 2.0;
  double p = 0.0;
  if (std::fabs(r) < 1.0) p = student_t_two_sided(r * std::sqrt(df / ((1.0 - r) * (1.0 + r))), df);
  CorrelationResult out;
  out.method = method;
  out.coefficient = r;
  out.p_value = std::clamp(p, 0.0, 1.0);
  out.n = a.size();
  out.alpha = alpha;
  out.reject_null = out.p_value < alpha;
  return out;
}

std::pair<std::vector<double>, std::vector<double>> complete_pairs(const tabular::Column& a,
                                                                   const tabular::Column& b) {
  if (a.size() != b.size()) throw InvalidInput("columns '" + a.name() + "' and '" + b.name() + "' differ in length");
  auto va = a.numbers();
  auto vb = b.numbers();
  std::vector<double> x, y;
  for (std::size_t i = 0; i < va.size(); ++i) {
    if (a.is_missing(i) || b.is_missing(i)) continue;
    x.push_back(va[i]);
    y.push_back(vb[i]);
  }
  return {std::move(x), std::move(y)};
}

CorrelationResult correlation(CorrelationMethod method, const tabular::Column& a,
                              const tabular::Column& b, double alpha) {
  auto [x, y] = complete_pairs(a, b);
  return correlation(method, x, y, alpha);
}

}  // namespace statz::stats
