#include "statz/preprocess/transform.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "statz/error.hpp"
#include "statz/stats/descriptive.hpp"

namespace statz::preprocess {

namespace {

std::vector<std::string> numeric_columns(const tabular::Dataset& d, std::span<const std::string> columns) {
  if (!columns.empty()) {
    for (const auto& name : columns) {
      if (!d.column(name).is_numeric()) throw InvalidInput("column '" + name + "' is not numeric");
    }
    return {columns.begin(), columns.end()};
  }
  std::vector<std::string> out;
  for (const auto& c : d.columns()) {
    if (c.is_numeric()) out.push_back(c.name());
  }
  return out;
}

std::string normalize(std::string_view text) {
  std::string out;
  for (char ch : text) {
    if (std::isalnum(static_cast<unsigned char>(ch))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  return out;
}

}  // namespace

tabular::Dataset impute_mean(const tabular::Dataset& d, std::span<const std::string> columns) {
  tabular::Dataset out = d;
  for (const auto& name : numeric_columns(d, columns)) {
    const auto& c = d.column(name);
    if (c.missing_count() == 0) continue;
    const auto present = c.present();
    if (present.empty()) throw DegenerateInput("column '" + name + "' has no present values to impute from");
    const double m = stats::mean(present);
    std::vector<double> values(c.numbers().begin(), c.numbers().end());
    for (auto& v : values) {
      if (std::isnan(v)) v = m;
    }
    out = out.with_column(tabular::Column::numeric(name, std::move(values)));
  }
  return out;
}

const char* to_string(ScalingMethod m) noexcept {
  switch (m) {
    case ScalingMethod::min_max: return "min_max";
    case ScalingMethod::z_score: return "z_score";
    case ScalingMethod::l1_norm: return "l1_norm";
    case ScalingMethod::l2_norm: return "l2_norm";
  }
  return "unknown";
}

const char* label(ScalingMethod m) noexcept {
  switch (m) {
    case ScalingMethod::min_max: return "Min-max scaling";
    case ScalingMethod::z_score: return "z-score scaling";
    case ScalingMethod::l1_norm: return "L1 norm scaling";
    case ScalingMethod::l2_norm: return "L2 norm scaling";
  }
  return "unknown";
}

std::optional<ScalingMethod> parse_scaling_method(std::string_view text) {
  std::string key = normalize(text);
  if (key.size() > 7 && key.ends_with("scaling")) key.resize(key.size() - 7);
  if (key == "minmax" || key == "range") return ScalingMethod::min_max;
  if (key == "zscore" || key == "z" || key == "standard" || key == "standardize") return ScalingMethod::z_score;
  if (key == "l1norm" || key == "l1") return ScalingMethod::l1_norm;
  if (key == "l2norm" || key == "l2" || key == "unitnorm") return ScalingMethod::l2_norm;
  return std::nullopt;
}

std::vector<double> scale(std::span<const double> x, ScalingMethod method) {
  std::vector<double> present;
  for (double v : x) {
    if (!std::isnan(v)) present.push_back(v);
  }
  if (present.empty()) throw EmptyInput("nothing to scale");
  double offset = 0.0;
  double divisor = 1.0;
  switch (method) {
    case ScalingMethod::min_max: {
      const auto [lo, hi] = std::minmax_element(present.begin(), present.end());
      offset = *lo;
      divisor = *hi - *lo;
      if (divisor == 0.0) throw DegenerateInput("min-max scaling of a constant column");
      break;
    }
    case ScalingMethod::z_score: {
      if (present.size() < 2) throw TooFewObservations(2, present.size(), "z-score scaling");
      offset = stats::mean(present);
      divisor = std::sqrt(stats::variance(present));
      if (divisor == 0.0) throw DegenerateInput("z-score scaling of a constant column");
      break;
    }
    case ScalingMethod::l1_norm: {
      divisor = 0.0;
      for (double v : present) divisor += std::abs(v);
      if (divisor == 0.0) throw DegenerateInput("L1 norm scaling of an all-zero column");
      break;
    }
    case ScalingMethod::l2_norm: {
      double big = 0.0;
      for (double v : present) big = std::max(big, std::abs(v));
      if (big == 0.0) throw DegenerateInput("L2 norm scaling of an all-zero column");
      double ss = 0.0;
      for (double v : present) ss += (v / big) * (v / big);
      divisor = big * std::sqrt(ss);
      break;
    }
  }
  std::vector<double> out(x.begin(), x.end());
  for (auto& v : out) {
    if (!std::isnan(v)) v = (v - offset) / divisor;
  }
  return out;
}

tabular::Column scale(const tabular::Column& x, ScalingMethod method) {
  if (!x.is_numeric()) throw InvalidInput("column '" + x.name() + "' is not numeric");
  return tabular::Column::numeric(x.name(), scale(x.numbers(), method), x.missing_mask());
}

}  // namespace statz::preprocess
