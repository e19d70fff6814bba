#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace statz::advisor {

enum class Normality { normal, non_normal, unknown };
enum class EqualVariance { yes, no, unknown };
enum class Goal { compare_location, association, describe, preprocess };

const char* to_string(Normality v) noexcept;
const char* to_string(EqualVariance v) noexcept;
const char* to_string(Goal v) noexcept;

/// What the user has told us about the study design. For association goals
/// n_groups counts variables.
struct DesignDescriptor {
  std::size_t n_groups = 2;
  bool paired = false;
  Normality normality = Normality::unknown;
  EqualVariance equal_variance = EqualVariance::unknown;
  Goal goal = Goal::compare_location;
  std::optional<double> reference_mean;  // one-sample comparisons
};

struct TraceStep {
  std::string question;
  std::string answer;
  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

/// A check attached to a recommendation. `scope` is "group" (with the
/// 0-based group index), "differences" (paired differences), "all_groups" or
/// "post_hoc" (run after a significant omnibus result).
struct Prerequisite {
  std::string method_id;
  std::string scope;
  std::optional<std::size_t> group;
  friend bool operator==(const Prerequisite&, const Prerequisite&) = default;
};

struct Recommendation {
  /// Empty while a prerequisite must answer an open design question first.
  std::optional<std::string> method_id;
  std::string rationale;
  std::vector<TraceStep> pathway_trace;
  std::vector<Prerequisite> prerequisites;
  std::map<std::string, std::string> parameters;

  bool committed() const noexcept { return method_id.has_value(); }
  friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

/// Table lookup from design to method. Throws Incomplete when the design
/// cannot be resolved from the descriptor alone (one-sample comparison
/// without a reference mean, association with a single variable, an
/// unspecified preprocessing step).
Recommendation recommend_test(const DesignDescriptor& d);

void to_json(nlohmann::json& j, const Recommendation& r);

}  // namespace statz::advisor
