#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "statz/tabular/column.hpp"

namespace statz::stats {

struct DescriptiveStats {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;  // n - 1 denominator; 0 when n == 1
  double min = 0.0;
  double max = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

DescriptiveStats describe(std::span<const double> x);
/// Missing cells are excluded.
DescriptiveStats describe(const tabular::Column& x);

/// Linear-interpolation quantile (Hyndman-Fan type 7) of sorted data.
double quantile_sorted(std::span<const double> sorted, double p);
double mean(std::span<const double> x);
/// Sample variance (n - 1 denominator).
double variance(std::span<const double> x);
double median(std::span<const double> x);

enum class PlotKind { histogram, scatter, qq };
const char* to_string(PlotKind kind) noexcept;

struct PlotData {
  PlotKind kind = PlotKind::histogram;
  std::vector<double> edges;                       // histogram: bins + 1 edges
  std::vector<std::size_t> counts;                 // histogram
  std::vector<std::pair<double, double>> points;   // scatter (x, y) | qq (theoretical, sample)
};

struct PlotOptions {
  std::optional<int> bins;  // histogram only; default 10
};

/// Equal-width bins over [min, max]; every bin is [lo, hi) except the last,
/// which is closed. A constant sample gets the range [v - 0.5, v + 0.5].
PlotData histogram(std::span<const double> x, int bins = 10);
PlotData scatter(std::span<const double> x, std::span<const double> y);
/// Sorted sample against standard normal quantiles at Blom positions
/// (i - 0.375) / (n + 0.25).
PlotData qq(std::span<const double> x);

/// Column front end: histogram/qq take one column, scatter two; missing
/// cells are dropped (row-wise for scatter).
PlotData plot_data(PlotKind kind, std::initializer_list<const tabular::Column*> inputs,
                   const PlotOptions& options = {});

void to_json(nlohmann::json& j, const DescriptiveStats& s);
void to_json(nlohmann::json& j, const PlotData& p);

}  // namespace statz::stats
