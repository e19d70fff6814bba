#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace statz::stats {

inline constexpr double kDefaultAlpha = 0.05;

/// One value for t / chi-square tests, a pair for F tests.
struct DegreesOfFreedom {
  double first = 0.0;
  std::optional<double> second;

  friend bool operator==(const DegreesOfFreedom&, const DegreesOfFreedom&) = default;
};

/// Outcome of a hypothesis test. Construct through `make_result` so that
/// p_value is clamped into [0, 1] and reject_null == (p_value < alpha).
struct TestResult {
  std::string method;
  double statistic = 0.0;
  std::optional<DegreesOfFreedom> df;
  double p_value = 1.0;
  double alpha = kDefaultAlpha;
  bool reject_null = false;

  friend bool operator==(const TestResult&, const TestResult&) = default;
};

TestResult make_result(std::string method, double statistic, std::optional<DegreesOfFreedom> df,
                       double p_value, double alpha);

enum class CorrelationMethod { pearson, spearman };
const char* to_string(CorrelationMethod m) noexcept;

struct CorrelationResult {
  CorrelationMethod method = CorrelationMethod::pearson;
  double coefficient = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
  double alpha = kDefaultAlpha;
  bool reject_null = false;
};

/// Pairwise post-hoc p-values: symmetric, unit diagonal, entries in [0, 1].
struct PosthocMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> p_values;

  double at(std::size_t i, std::size_t j) const { return p_values.at(i).at(j); }
  std::size_t size() const noexcept { return labels.size(); }
};

/// {method, statistic, df, p_value, alpha, reject_null}; df is a number, a
/// two-element array, or null.
void to_json(nlohmann::json& j, const TestResult& r);
void to_json(nlohmann::json& j, const CorrelationResult& r);
void to_json(nlohmann::json& j, const PosthocMatrix& m);

}  // namespace statz::stats
