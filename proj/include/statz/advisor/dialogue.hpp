#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "statz/advisor/design.hpp"
#include "statz/preprocess/transform.hpp"
#include "statz/stats/descriptive.hpp"

namespace statz::advisor {

/// The ten study tasks plus test advice without execution.
enum class Task {
  none,
  import_data,
  describe,
  plot,
  compare,
  normality,
  correlate,
  impute,
  outliers,
  reduce,
  scale,
  export_data,
  advise,
};

const char* to_string(Task t) noexcept;
std::optional<Task> parse_task(std::string_view id);

enum class Expects { free_text, choice, column_name, file };
const char* to_string(Expects e) noexcept;

struct Choice {
  std::string id;
  std::string label;
  friend bool operator==(const Choice&, const Choice&) = default;
};

struct GuidancePrompt {
  std::string text;
  std::vector<Choice> choices;  // at least two when expects == choice
  Expects expects = Expects::free_text;
  /// Dialogue slot an answer fills: task, file, paired, n_groups, columns,
  /// reference_mean, normality, equal_variance, components, scaling, plot.
  std::string slot;
  friend bool operator==(const GuidancePrompt&, const GuidancePrompt&) = default;
};

/// Everything the dialogue has collected for the task in progress. An
/// answered "unknown" is stored as Normality::unknown; nullopt means the
/// question has not been asked.
struct DialogueState {
  bool has_dataset = false;
  Task task = Task::none;
  std::vector<std::string> columns;
  /// A categorical column that splits `columns` into groups.
  std::optional<std::string> group_by;
  std::optional<bool> paired;
  std::optional<std::size_t> n_groups;
  std::optional<Normality> normality;
  std::optional<EqualVariance> equal_variance;
  std::optional<double> reference_mean;
  std::optional<std::size_t> components;
  std::optional<preprocess::ScalingMethod> scaling;
  std::optional<stats::PlotKind> plot;
  std::optional<int> bins;
  std::optional<double> contamination;
  /// Catalog id of a method the user asked for by name.
  std::optional<std::string> method;
};

GuidancePrompt greeting();
/// Choice prompt with one entry per task.
GuidancePrompt task_menu();

/// The next question needed before the current task can run, or nullopt
/// when it is ready.
std::optional<GuidancePrompt> pending_question(const DialogueState& s);

/// The prompt to show now: the greeting without a dataset, a pending
/// question, or the task menu.
GuidancePrompt next_prompt(const DialogueState& s);

/// Columns the task needs before it can run.
std::size_t minimum_columns(const DialogueState& s);

/// Design implied by a compare / correlate / advise state.
DesignDescriptor descriptor(const DialogueState& s);

void to_json(nlohmann::json& j, const GuidancePrompt& p);

}  // namespace statz::advisor
