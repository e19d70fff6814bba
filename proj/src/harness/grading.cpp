#include "statz/harness/grading.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

#include "statz/error.hpp"
#include "statz/tabular/csv.hpp"

namespace statz::harness {

extern const char* const kIrisAnswerKey;

namespace {

std::string canonical(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::optional<double> as_number(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string cell(const tabular::Column& c, std::size_t r) {
  if (c.is_missing(r)) return "";
  return c.is_numeric() ? tabular::format_number(c.number(r)) : c.label(r);
}

}  // namespace

bool answers_match(std::string_view answer, std::string_view expected, double tolerance) {
  const auto a = canonical(answer);
  const auto b = canonical(expected);
  if (a.empty() || b.empty()) return false;
  const auto x = as_number(a);
  const auto y = as_number(b);
  if (x && y) return std::abs(*x - *y) <= tolerance * std::max(1.0, std::abs(*y));
  return a == b;
}

TaskGrade grade(std::span<const std::string> submissions, std::span<const std::string> key, double tolerance) {
  if (submissions.size() != key.size()) {
    throw InvalidInput("got " + std::to_string(submissions.size()) + " answers for " + std::to_string(key.size()) +
                       " tasks");
  }
  if (key.empty()) throw InvalidInput("answer key has no tasks");
  TaskGrade g;
  for (std::size_t i = 0; i < key.size(); ++i) g.per_task.push_back(answers_match(submissions[i], key[i], tolerance));
  g.accuracy = static_cast<double>(std::count(g.per_task.begin(), g.per_task.end(), 1)) /
               static_cast<double>(g.per_task.size());
  return g;
}

AnswerKey read_answer_key(const tabular::Dataset& d) {
  const auto& task = d.column("task");
  const auto& answer = d.column("answer");
  AnswerKey k;
  for (std::size_t r = 0; r < d.rows(); ++r) {
    const auto t = cell(task, r);
    if (t.empty()) throw InvalidInput("answer key row " + std::to_string(r + 1) + " has no task");
    if (std::find(k.tasks.begin(), k.tasks.end(), t) != k.tasks.end()) {
      throw InvalidInput("task '" + t + "' appears twice in the answer key");
    }
    k.tasks.push_back(t);
    k.answers.push_back(cell(answer, r));
  }
  if (k.tasks.empty()) throw InvalidInput("answer key has no tasks");
  return k;
}

std::vector<TaskGrade> grade_submissions(const tabular::Dataset& submissions, const AnswerKey& key,
                                         double tolerance) {
  const auto& participant = submissions.column("participant");
  const auto& tool = submissions.column("tool");
  const auto& task = submissions.column("task");
  const auto& answer = submissions.column("answer");
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::map<std::string, std::string>> answers;
  for (std::size_t r = 0; r < submissions.rows(); ++r) {
    std::pair<std::string, std::string> who{cell(participant, r), cell(tool, r)};
    if (!answers.count(who)) order.push_back(who);
    auto& row = answers[who];
    const auto t = cell(task, r);
    if (std::find(key.tasks.begin(), key.tasks.end(), t) == key.tasks.end()) {
      throw InvalidInput("submission row " + std::to_string(r + 1) + " answers unknown task '" + t + "'");
    }
    if (!row.emplace(t, cell(answer, r)).second) {
      throw InvalidInput(who.first + "/" + who.second + " answers task '" + t + "' twice");
    }
  }
  std::vector<TaskGrade> out;
  for (const auto& who : order) {
    const auto& row = answers[who];
    if (row.size() != key.tasks.size()) {
      throw InvalidInput(who.first + "/" + who.second + " answered " + std::to_string(row.size()) + " of " +
                         std::to_string(key.tasks.size()) + " tasks");
    }
    std::vector<std::string> given;
    for (const auto& t : key.tasks) given.push_back(row.at(t));
    auto g = grade(given, key.answers, tolerance);
    g.participant = who.first;
    g.tool = who.second;
    out.push_back(std::move(g));
  }
  return out;
}

AnswerKey iris_answer_key() {
  static const AnswerKey key = read_answer_key(tabular::import_csv(kIrisAnswerKey));
  return key;
}

void to_json(nlohmann::json& j, const TaskGrade& g) {
  j = {{"participant", g.participant}, {"tool", g.tool}, {"per_task", g.per_task}, {"accuracy", g.accuracy}};
}

std::string grades_csv(const std::vector<TaskGrade>& grades, const std::vector<std::string>& tasks) {
  std::vector<tabular::Column> cols;
  std::vector<std::string> participants, tools;
  std::vector<double> accuracy;
  for (const auto& g : grades) {
    participants.push_back(g.participant);
    tools.push_back(g.tool);
    accuracy.push_back(g.accuracy);
  }
  cols.push_back(tabular::Column::text("participant", participants));
  cols.push_back(tabular::Column::text("tool", tools));
  cols.push_back(tabular::Column::numeric("accuracy", accuracy));
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    std::vector<double> v;
    for (const auto& g : grades) v.push_back(g.per_task.at(t));
    cols.push_back(tabular::Column::numeric("task_" + tasks[t], v));
  }
  return tabular::export_csv(tabular::Dataset(std::move(cols)));
}

}  // namespace statz::harness
