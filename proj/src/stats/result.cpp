#include "statz/stats/result.hpp"

#include <algorithm>
#include <cmath>

#include "statz/error.hpp"

namespace statz::stats {

TestResult make_result(std::string method, double statistic, std::optional<DegreesOfFreedom> df,
                       double p_value, double alpha) {
  if (std::isnan(p_value)) throw InvalidInput(method + ": p-value is NaN");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  TestResult r;
  r.method = std::move(method);
  r.statistic = statistic;
  r.df = df;
  r.p_value = std::clamp(p_value, 0.0, 1.0);
  r.alpha = alpha;
  r.reject_null = r.p_value < alpha;
  return r;
}

const char* to_string(CorrelationMethod m) noexcept {
  return m == CorrelationMethod::pearson ? "pearson" : "spearman";
}

void to_json(nlohmann::json& j, const TestResult& r) {
  j = nlohmann::json{{"method", r.method}, {"statistic", r.statistic}};
  if (!r.df) {
    j["df"] = nullptr;
  } else if (r.df->second) {
    j["df"] = nlohmann::json::array({r.df->first, *r.df->second});
  } else {
    j["df"] = r.df->first;
  }
  j["p_value"] = r.p_value;
  j["alpha"] = r.alpha;
  j["reject_null"] = r.reject_null;
}

void to_json(nlohmann::json& j, const CorrelationResult& r) {
  j = nlohmann::json{{"method", to_string(r.method)},
                     {"coefficient", r.coefficient},
                     {"p_value", r.p_value},
                     {"n", r.n},
                     {"alpha", r.alpha},
                     {"reject_null", r.reject_null}};
}

void to_json(nlohmann::json& j, const PosthocMatrix& m) {
  j = nlohmann::json{{"labels", m.labels}, {"p_values", m.p_values}};
}

}  // namespace statz::stats
