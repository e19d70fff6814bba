#include "statz/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "statz/error.hpp"
#include "statz/tabular/csv.hpp"

namespace statz::harness {

namespace {

std::string cell(const tabular::Column& c, std::size_t r) {
  if (c.is_missing(r)) return "";
  return c.is_numeric() ? tabular::format_number(c.number(r)) : c.label(r);
}

double number(const tabular::Dataset& d, const std::string& name, std::size_t r) {
  const auto& c = d.column(name);
  if (!c.is_numeric()) throw InvalidInput("column '" + name + "' must be numeric");
  if (c.is_missing(r)) throw InvalidInput("column '" + name + "' is empty on row " + std::to_string(r + 1));
  return c.number(r);
}

template <class T>
std::size_t index_in(std::vector<T>& v, const T& x) {
  const auto it = std::find(v.begin(), v.end(), x);
  if (it != v.end()) return static_cast<std::size_t>(it - v.begin());
  v.push_back(x);
  return v.size() - 1;
}

}  // namespace

double pixels_to_meters(double px, double dpi) { return px * 0.0254 / dpi; }

std::vector<ToolMetrics> aggregate(std::span<const InteractionLog> logs, double dpi) {
  if (logs.empty()) throw InvalidInput("no interaction logs");
  if (!(dpi > 0.0) || !std::isfinite(dpi)) throw InvalidInput("dpi must be positive");
  std::vector<std::string> tools;
  std::vector<std::map<std::string, InteractionLog>> totals;
  for (const auto& l : logs) {
    for (double v : {l.duration_s, l.keystrokes, l.mouse_clicks, l.mouse_distance_px}) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidInput("interaction log of " + l.participant + "/" + l.tool + " has a negative or invalid field");
      }
    }
    const auto t = index_in(tools, l.tool);
    if (totals.size() < tools.size()) totals.emplace_back();
    auto& sum = totals[t][l.participant];
    sum.duration_s += l.duration_s;
    sum.keystrokes += l.keystrokes;
    sum.mouse_clicks += l.mouse_clicks;
    sum.mouse_distance_px += l.mouse_distance_px;
  }
  std::vector<ToolMetrics> out;
  for (std::size_t t = 0; t < tools.size(); ++t) {
    ToolMetrics m;
    m.tool = tools[t];
    m.participants = totals[t].size();
    for (const auto& [participant, s] : totals[t]) {
      m.duration_s += s.duration_s;
      m.keystrokes += s.keystrokes;
      m.mouse_clicks += s.mouse_clicks;
      m.mouse_distance_px += s.mouse_distance_px;
    }
    const auto n = static_cast<double>(m.participants);
    m.duration_s /= n;
    m.keystrokes /= n;
    m.mouse_clicks /= n;
    m.mouse_distance_px /= n;
    m.mouse_distance_m = pixels_to_meters(m.mouse_distance_px, dpi);
    out.push_back(m);
  }
  return out;
}

std::vector<InteractionLog> read_interaction_logs(const tabular::Dataset& d) {
  std::vector<InteractionLog> out;
  for (std::size_t r = 0; r < d.rows(); ++r) {
    InteractionLog l;
    l.participant = cell(d.column("participant"), r);
    l.tool = cell(d.column("tool"), r);
    l.duration_s = number(d, "duration_s", r);
    l.keystrokes = number(d, "keystrokes", r);
    l.mouse_clicks = number(d, "mouse_clicks", r);
    l.mouse_distance_px = number(d, "mouse_distance_px", r);
    out.push_back(l);
  }
  return out;
}

void to_json(nlohmann::json& j, const ToolMetrics& m) {
  j = {{"tool", m.tool},
       {"participants", m.participants},
       {"duration_s", m.duration_s},
       {"keystrokes", m.keystrokes},
       {"mouse_clicks", m.mouse_clicks},
       {"mouse_distance_px", m.mouse_distance_px},
       {"mouse_distance_m", m.mouse_distance_m}};
}

std::string metrics_csv(const std::vector<ToolMetrics>& rows) {
  std::vector<std::string> tools;
  std::vector<double> n, dur, keys, clicks, px, m;
  for (const auto& r : rows) {
    tools.push_back(r.tool);
    n.push_back(static_cast<double>(r.participants));
    dur.push_back(r.duration_s);
    keys.push_back(r.keystrokes);
    clicks.push_back(r.mouse_clicks);
    px.push_back(r.mouse_distance_px);
    m.push_back(r.mouse_distance_m);
  }
  return tabular::export_csv(tabular::Dataset({tabular::Column::text("tool", tools),
                                               tabular::Column::numeric("participants", n),
                                               tabular::Column::numeric("duration_s", dur),
                                               tabular::Column::numeric("keystrokes", keys),
                                               tabular::Column::numeric("mouse_clicks", clicks),
                                               tabular::Column::numeric("mouse_distance_px", px),
                                               tabular::Column::numeric("mouse_distance_m", m)}));
}

long NielsenTotals::total(std::string_view s, std::string_view h) const {
  const auto si = std::find(software.begin(), software.end(), s);
  const auto hi = std::find(heuristics.begin(), heuristics.end(), h);
  if (si == software.end() || hi == heuristics.end()) return 0;
  return totals[static_cast<std::size_t>(hi - heuristics.begin())][static_cast<std::size_t>(si - software.begin())];
}

NielsenTotals nielsen_aggregate(std::span<const NielsenRating> ratings) {
  if (ratings.empty()) throw InvalidInput("no ratings");
  NielsenTotals t;
  for (const auto& r : ratings) {
    if (r.score < 1 || r.score > 5) {
      throw InvalidInput("score " + std::to_string(r.score) + " from " + r.participant + " is outside 1..5");
    }
    index_in(t.software, r.software);
    index_in(t.heuristics, r.heuristic);
  }
  t.totals.assign(t.heuristics.size(), std::vector<long>(t.software.size(), 0));
  for (const auto& r : ratings) {
    const auto s = index_in(t.software, r.software);
    const auto h = index_in(t.heuristics, r.heuristic);
    t.totals[h][s] += r.score;
  }
  for (std::size_t h = 0; h < t.heuristics.size(); ++h) {
    auto order = t.software;
    std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
      const auto ta = t.total(a, t.heuristics[h]);
      const auto tb = t.total(b, t.heuristics[h]);
      return ta != tb ? ta > tb : a < b;
    });
    t.ranking.push_back(std::move(order));
  }
  return t;
}

std::vector<NielsenRating> read_nielsen_ratings(const tabular::Dataset& d) {
  std::vector<NielsenRating> out;
  for (std::size_t r = 0; r < d.rows(); ++r) {
    NielsenRating x;
    x.participant = cell(d.column("participant"), r);
    x.software = cell(d.column("software"), r);
    x.heuristic = cell(d.column("heuristic"), r);
    const double s = number(d, "score", r);
    if (s != std::floor(s)) throw InvalidInput("score on row " + std::to_string(r + 1) + " is not a whole number");
    x.score = static_cast<int>(std::clamp(s, -1.0, 100.0));
    out.push_back(x);
  }
  return out;
}

void to_json(nlohmann::json& j, const NielsenTotals& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t h = 0; h < t.heuristics.size(); ++h) {
    nlohmann::json totals = nlohmann::json::object();
    for (std::size_t s = 0; s < t.software.size(); ++s) totals[t.software[s]] = t.totals[h][s];
    rows.push_back({{"heuristic", t.heuristics[h]}, {"totals", totals}, {"ranking", t.ranking[h]}});
  }
  j = {{"software", t.software}, {"heuristics", rows}};
}

std::string nielsen_csv(const NielsenTotals& t) {
  std::vector<tabular::Column> cols{tabular::Column::text("heuristic", t.heuristics)};
  for (std::size_t s = 0; s < t.software.size(); ++s) {
    std::vector<double> v;
    for (std::size_t h = 0; h < t.heuristics.size(); ++h) v.push_back(static_cast<double>(t.totals[h][s]));
    cols.push_back(tabular::Column::numeric(t.software[s], v));
  }
  return tabular::export_csv(tabular::Dataset(std::move(cols)));
}

}  // namespace statz::harness
