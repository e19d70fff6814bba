#include "statz/stats/descriptive.hpp"

#include <algorithm>
#include <cmath>

#include "statz/error.hpp"
#include "statz/stats/distributions.hpp"
#include "statz/stats/tests.hpp"
#include "validate.hpp"

namespace statz::stats {

double mean(std::span<const double> x) {
  if (x.empty()) throw TooFewObservations(1, 0, "mean");
  double sum = 0.0;
  for (double v : x) sum += v;
  double m = sum / static_cast<double>(x.size());
  // One refinement pass removes most of the rounding left by the naive sum.
  double correction = 0.0;
  for (double v : x) correction += v - m;
  return m + correction / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) throw TooFewObservations(2, x.size(), "variance");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw TooFewObservations(1, 0, "quantile");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

double median(std::span<const double> x) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_sorted(sorted, 0.5);
}

DescriptiveStats describe(std::span<const double> x) {
  detail::require_size(x, 1, "describe");
  detail::require_finite(x, "describe");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  DescriptiveStats s;
  s.n = x.size();
  s.mean = mean(x);
  s.sd = x.size() > 1 ? std::sqrt(variance(x)) : 0.0;
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = quantile_sorted(sorted, 0.5);
  s.q1 = quantile_sorted(sorted, 0.25);
  s.q3 = quantile_sorted(sorted, 0.75);
  return s;
}

DescriptiveStats describe(const tabular::Column& x) {
  auto values = x.present();
  if (values.empty()) throw TooFewObservations(1, 0, "describe '" + x.name() + "'");
  return describe(values);
}

const char* to_string(PlotKind kind) noexcept {
  switch (kind) {
    case PlotKind::histogram: return "histogram";
    case PlotKind::scatter: return "scatter";
    case PlotKind::qq: return "qq";
  }
  return "histogram";
}

PlotData histogram(std::span<const double> x, int bins) {
  if (bins < 1) throw InvalidInput("histogram: bins must be at least 1");
  detail::require_size(x, 1, "histogram");
  detail::require_finite(x, "histogram");
  auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  PlotData p;
  p.kind = PlotKind::histogram;
  const auto nb = static_cast<std::size_t>(bins);
  const double width = (hi - lo) / static_cast<double>(nb);
  p.edges.resize(nb + 1);
  for (std::size_t i = 0; i < nb; ++i) p.edges[i] = lo + static_cast<double>(i) * width;
  p.edges[nb] = hi;
  p.counts.assign(nb, 0);
  for (double v : x) {
    auto idx = static_cast<std::size_t>(std::clamp((v - lo) / width, 0.0, static_cast<double>(nb - 1)));
    // Settle values that land on an edge after rounding: bins are [lo, hi).
    while (idx > 0 && v < p.edges[idx]) --idx;
    while (idx + 1 < nb && v >= p.edges[idx + 1]) ++idx;
    ++p.counts[idx];
  }
  return p;
}

PlotData scatter(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidInput("scatter: x and y differ in length");
  detail::require_finite(x, "scatter");
  detail::require_finite(y, "scatter");
  PlotData p;
  p.kind = PlotKind::scatter;
  p.points.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p.points.emplace_back(x[i], y[i]);
  return p;
}

PlotData qq(std::span<const double> x) {
  detail::require_size(x, 3, "qq plot");
  detail::require_finite(x, "qq plot");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  PlotData p;
  p.kind = PlotKind::qq;
  p.points.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double position = (static_cast<double>(i + 1) - 0.375) / (n + 0.25);
    p.points.emplace_back(normal_quantile(position), sorted[i]);
  }
  return p;
}

PlotData plot_data(PlotKind kind, std::initializer_list<const tabular::Column*> inputs,
                   const PlotOptions& options) {
  const std::size_t expected = kind == PlotKind::scatter ? 2 : 1;
  if (inputs.size() != expected) {
    throw InvalidInput(std::string(to_string(kind)) + " takes " + std::to_string(expected) +
                       " column(s)");
  }
  auto first = *inputs.begin();
  switch (kind) {
    case PlotKind::histogram: return histogram(first->present(), options.bins.value_or(10));
    case PlotKind::qq: return qq(first->present());
    case PlotKind::scatter: {
      auto [x, y] = complete_pairs(*first, **(inputs.begin() + 1));
      return scatter(x, y);
    }
  }
  throw InvalidInput("unknown plot kind");
}

void to_json(nlohmann::json& j, const DescriptiveStats& s) {
  j = nlohmann::json{{"n", s.n},         {"mean", s.mean}, {"median", s.median}, {"sd", s.sd},
                     {"min", s.min},     {"max", s.max},   {"q1", s.q1},         {"q3", s.q3}};
}

void to_json(nlohmann::json& j, const PlotData& p) {
  j = nlohmann::json{{"kind", to_string(p.kind)}};
  if (p.kind == PlotKind::histogram) {
    j["edges"] = p.edges;
    j["counts"] = p.counts;
  } else {
    auto points = nlohmann::json::array();
    for (auto [a, b] : p.points) points.push_back({a, b});
    j["points"] = std::move(points);
  }
}

}  // namespace statz::stats
