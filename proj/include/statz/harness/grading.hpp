#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "statz/tabular/dataset.hpp"

namespace statz::harness {

struct TaskGrade {
  std::string participant;
  std::string tool;
  std::vector<int> per_task;  // 1 correct, 0 otherwise
  double accuracy = 0.0;
};

/// Numbers match when |a - b| <= tolerance * max(1, |b|) (b from the key);
/// anything else compares case-insensitively with runs of whitespace
/// collapsed and the ends trimmed. An empty answer never matches.
bool answers_match(std::string_view answer, std::string_view expected, double tolerance = 1e-6);

/// Throws InvalidInput when the lengths differ.
TaskGrade grade(std::span<const std::string> submissions, std::span<const std::string> key,
                double tolerance = 1e-6);

struct AnswerKey {
  std::vector<std::string> tasks;
  std::vector<std::string> answers;
};

/// Key CSV: columns task, answer.
AnswerKey read_answer_key(const tabular::Dataset& d);

/// Long-format submissions (participant, tool, task, answer) graded per
/// (participant, tool). Every pair must answer exactly the key's tasks.
std::vector<TaskGrade> grade_submissions(const tabular::Dataset& submissions, const AnswerKey& key,
                                         double tolerance = 1e-6);

/// Key for the ten bundled Iris tasks.
AnswerKey iris_answer_key();

void to_json(nlohmann::json& j, const TaskGrade& g);
/// participant,tool,accuracy,<task...>
std::string grades_csv(const std::vector<TaskGrade>& grades, const std::vector<std::string>& tasks);

}  // namespace statz::harness
