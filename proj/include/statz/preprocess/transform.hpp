#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "statz/tabular/dataset.hpp"

namespace statz::preprocess {

/// Replaces every missing cell of the named numeric columns with the mean of
/// that column's present cells. An empty list selects every numeric column.
tabular::Dataset impute_mean(const tabular::Dataset& d, std::span<const std::string> columns);

enum class ScalingMethod { min_max, z_score, l1_norm, l2_norm };

inline constexpr ScalingMethod kScalingMethods[] = {ScalingMethod::min_max, ScalingMethod::z_score,
                                                   ScalingMethod::l1_norm, ScalingMethod::l2_norm};

/// Stable identifier ("min_max", ...).
const char* to_string(ScalingMethod m) noexcept;
/// Human label ("Min-max scaling", ...).
const char* label(ScalingMethod m) noexcept;
/// Accepts identifiers and common spellings ("min-max", "zscore", "L2 norm").
std::optional<ScalingMethod> parse_scaling_method(std::string_view text);

/// min_max: (x - min) / (max - min); z_score: (x - mean) / sd (sample sd);
/// l1_norm: x / sum|x|; l2_norm: x / sqrt(sum x^2). Missing cells stay
/// missing and do not enter the statistics.
tabular::Column scale(const tabular::Column& x, ScalingMethod method);
std::vector<double> scale(std::span<const double> x, ScalingMethod method);

}  // namespace statz::preprocess
