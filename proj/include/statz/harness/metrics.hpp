#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "statz/tabular/dataset.hpp"

namespace statz::harness {

struct InteractionLog {
  std::string participant;
  std::string tool;
  double duration_s = 0.0;
  double keystrokes = 0.0;
  double mouse_clicks = 0.0;
  double mouse_distance_px = 0.0;
};

struct ToolMetrics {
  std::string tool;
  std::size_t participants = 0;
  double duration_s = 0.0;
  double keystrokes = 0.0;
  double mouse_clicks = 0.0;
  double mouse_distance_px = 0.0;
  double mouse_distance_m = 0.0;
};

inline constexpr double kDefaultDpi = 96.0;

/// px * 0.0254 / dpi.
double pixels_to_meters(double px, double dpi = kDefaultDpi);

/// Logs of one (participant, tool) are summed first; each tool row is the
/// mean over its participants. Rows come in first-seen tool order.
/// Throws InvalidInput on no logs, negative fields or dpi <= 0.
std::vector<ToolMetrics> aggregate(std::span<const InteractionLog> logs, double dpi = kDefaultDpi);

/// Columns participant, tool, duration_s, keystrokes, mouse_clicks, mouse_distance_px.
std::vector<InteractionLog> read_interaction_logs(const tabular::Dataset& d);

void to_json(nlohmann::json& j, const ToolMetrics& m);
std::string metrics_csv(const std::vector<ToolMetrics>& rows);

struct NielsenRating {
  std::string participant;
  std::string software;
  std::string heuristic;
  int score = 0;
};

struct NielsenTotals {
  std::vector<std::string> software;   // first-seen order
  std::vector<std::string> heuristics;  // first-seen order
  /// totals[h][s]
  std::vector<std::vector<long>> totals;
  /// Per heuristic: software by total, highest first; ties by name.
  std::vector<std::vector<std::string>> ranking;

  long total(std::string_view software, std::string_view heuristic) const;
};

/// Throws InvalidInput for a score outside 1..5 or no ratings.
NielsenTotals nielsen_aggregate(std::span<const NielsenRating> ratings);
/// Columns participant, software, heuristic, score.
std::vector<NielsenRating> read_nielsen_ratings(const tabular::Dataset& d);

void to_json(nlohmann::json& j, const NielsenTotals& t);
/// heuristic,<software...>
std::string nielsen_csv(const NielsenTotals& t);

}  // namespace statz::harness
