#include "statz/advisor/dialogue.hpp"

#include <array>
#include <utility>

namespace statz::advisor {

namespace {

struct TaskName {
  Task task;
  const char* id;
  const char* label;
};

constexpr std::array<TaskName, 12> kTasks{{
    {Task::import_data, "import", "Import a dataset"},
    {Task::describe, "describe", "Descriptive statistics"},
    {Task::plot, "plot", "Plots (histogram, scatter, Q-Q)"},
    {Task::compare, "compare", "Hypothesis test"},
    {Task::normality, "normality", "Normality assessment"},
    {Task::correlate, "correlate", "Correlation analysis"},
    {Task::impute, "impute", "Mean imputation"},
    {Task::outliers, "outliers", "Outlier detection and removal"},
    {Task::reduce, "reduce", "Dimensionality reduction"},
    {Task::scale, "scale", "Data scaling"},
    {Task::export_data, "export", "Export data"},
    {Task::advise, "advise", "Which test should I use?"},
}};

GuidancePrompt choice(std::string text, std::string slot, std::vector<Choice> choices) {
  return {std::move(text), std::move(choices), Expects::choice, std::move(slot)};
}

GuidancePrompt ask_columns(const DialogueState& s) {
  const std::size_t need = minimum_columns(s);
  std::string text;
  switch (s.task) {
    case Task::compare:
    case Task::advise:
      text = s.n_groups && *s.n_groups == 1
                 ? "Which column holds the sample?"
                 : "Which columns should be compared? Name each column, or one numeric column and the "
                   "categorical column that defines the groups (for example 'sepal_length by species').";
      break;
    case Task::correlate: text = "Which columns should be correlated? Name at least two."; break;
    case Task::scale: text = "Which column should be scaled?"; break;
    case Task::plot:
      text = need > 1 ? "Which two columns should be plotted?" : "Which column should be plotted?";
      break;
    case Task::normality: text = "Which column should be checked for normality?"; break;
    default: text = "Which column?"; break;
  }
  if (!s.columns.empty() && s.columns.size() < need) {
    std::string named;
    for (const auto& c : s.columns) named += (named.empty() ? "" : ", ") + c;
    text = "So far I have " + named + " but need " + std::to_string(need) + " columns. " + text;
  }
  return {std::move(text), {}, Expects::column_name, "columns"};
}

GuidancePrompt ask_normality() {
  return choice("Are the data normally distributed?", "normality",
                {{"normal", "Yes, normally distributed"},
                 {"non_normal", "No, not normally distributed"},
                 {"unknown", "Not sure: check with Shapiro-Wilk"}});
}

GuidancePrompt ask_variance() {
  return choice("Do the groups have equal variances?", "equal_variance",
                {{"yes", "Yes, equal variances"}, {"no", "No, unequal variances"},
                 {"unknown", "Not sure: check with Levene's test"}});
}

bool one_sample_method(const std::optional<std::string>& m) {
  return m && (*m == "one_sample_t");
}

std::optional<GuidancePrompt> compare_question(const DialogueState& s) {
  if (s.method) {
    if (s.columns.size() < minimum_columns(s)) return ask_columns(s);
    const bool one = one_sample_method(s.method) || (s.n_groups && *s.n_groups == 1);
    if (one && !s.reference_mean) {
      return GuidancePrompt{"Which reference mean should the sample be compared against?", {}, Expects::free_text,
                            "reference_mean"};
    }
    return std::nullopt;
  }
  const bool single = s.n_groups && *s.n_groups == 1;
  if (!single && !s.paired) {
    return choice("Are the samples paired or independent?", "paired",
                  {{"paired", "Paired (same subjects measured more than once)"},
                   {"independent", "Independent (unrelated groups)"}});
  }
  if (!s.n_groups) {
    return choice("How many groups are you comparing?", "n_groups",
                  {{"1", "One sample against a reference mean"}, {"2", "Two groups"},
                   {"3", "Three or more groups"}});
  }
  if (s.columns.size() < minimum_columns(s)) return ask_columns(s);
  if (single && !s.reference_mean) {
    return GuidancePrompt{"Which reference mean should the sample be compared against?", {}, Expects::free_text,
                          "reference_mean"};
  }
  const bool repeated = s.paired.value_or(false) && *s.n_groups > 2;
  if (repeated) return std::nullopt;
  if (!s.normality) return ask_normality();
  if (*s.normality == Normality::normal && !single && !s.paired.value_or(false) && !s.equal_variance) {
    return ask_variance();
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(Task t) noexcept {
  if (t == Task::none) return "none";
  for (const auto& n : kTasks) {
    if (n.task == t) return n.id;
  }
  return "none";
}

std::optional<Task> parse_task(std::string_view id) {
  for (const auto& n : kTasks) {
    if (id == n.id) return n.task;
  }
  return std::nullopt;
}

const char* to_string(Expects e) noexcept {
  switch (e) {
    case Expects::free_text: return "free_text";
    case Expects::choice: return "choice";
    case Expects::column_name: return "column_name";
    case Expects::file: return "file";
  }
  return "free_text";
}

GuidancePrompt greeting() {
  return {"Hello! I can guide you through a statistical analysis step by step. Start by uploading a CSV "
          "file (drag and drop it here).",
          {},
          Expects::file,
          "file"};
}

GuidancePrompt task_menu() {
  GuidancePrompt p{"What would you like to do next?", {}, Expects::choice, "task"};
  for (const auto& n : kTasks) p.choices.push_back({n.id, n.label});
  return p;
}

std::size_t minimum_columns(const DialogueState& s) {
  switch (s.task) {
    case Task::describe:
    case Task::normality:
    case Task::scale:
      return 1;
    case Task::plot:
      return s.plot == stats::PlotKind::scatter ? 2 : 1;
    case Task::correlate:
      return 2;
    case Task::compare:
    case Task::advise: {
      if (s.group_by) return 1;
      if (s.method) {
        if (one_sample_method(s.method)) return 1;
        if (*s.method == "shapiro_wilk") return 1;
        if (*s.method == "kruskal_wallis" || *s.method == "one_way_anova" || *s.method == "levene" ||
            *s.method == "friedman") {
          return 2;
        }
        return s.n_groups && *s.n_groups == 1 ? 1 : 2;
      }
      if (!s.n_groups) return 1;
      return *s.n_groups == 1 ? 1 : (*s.n_groups == 2 ? 2 : 3);
    }
    default:
      return 0;
  }
}

std::optional<GuidancePrompt> pending_question(const DialogueState& s) {
  switch (s.task) {
    case Task::none:
      return std::nullopt;
    case Task::import_data:
      return GuidancePrompt{"Upload a CSV file to replace the current dataset.", {}, Expects::file, "file"};
    case Task::describe:
    case Task::normality:
      if (s.columns.size() < minimum_columns(s)) return ask_columns(s);
      return std::nullopt;
    case Task::plot:
      if (!s.plot) {
        return choice("Which kind of plot?", "plot",
                      {{"histogram", "Histogram"}, {"scatter", "Scatter plot"}, {"qq", "Q-Q plot"}});
      }
      if (s.columns.size() < minimum_columns(s)) return ask_columns(s);
      return std::nullopt;
    case Task::correlate:
      if (s.columns.size() < minimum_columns(s)) return ask_columns(s);
      if (!s.method && !s.normality) return ask_normality();
      return std::nullopt;
    case Task::compare:
    case Task::advise:
      return compare_question(s);
    case Task::reduce:
      if (!s.components) {
        return GuidancePrompt{"How many dimensions should the data be reduced to?", {}, Expects::free_text,
                              "components"};
      }
      return std::nullopt;
    case Task::scale:
      if (!s.scaling) {
        GuidancePrompt p{"Which scaling method would you like to use?", {}, Expects::choice, "scaling"};
        for (auto m : preprocess::kScalingMethods) p.choices.push_back({preprocess::to_string(m), preprocess::label(m)});
        return p;
      }
      if (s.columns.size() < minimum_columns(s)) return ask_columns(s);
      return std::nullopt;
    case Task::impute:
    case Task::outliers:
    case Task::export_data:
      return std::nullopt;
  }
  return std::nullopt;
}

GuidancePrompt next_prompt(const DialogueState& s) {
  if (!s.has_dataset && s.task != Task::advise) return greeting();
  if (auto q = pending_question(s)) return *q;
  return task_menu();
}

DesignDescriptor descriptor(const DialogueState& s) {
  DesignDescriptor d;
  d.goal = s.task == Task::correlate ? Goal::association : Goal::compare_location;
  d.n_groups = s.n_groups.value_or(s.columns.size() < 1 ? 1 : s.columns.size());
  d.paired = s.paired.value_or(false);
  d.normality = s.normality.value_or(Normality::unknown);
  d.equal_variance = s.equal_variance.value_or(EqualVariance::unknown);
  d.reference_mean = s.reference_mean;
  return d;
}

void to_json(nlohmann::json& j, const GuidancePrompt& p) {
  j = nlohmann::json::object();
  j["text"] = p.text;
  j["expects"] = to_string(p.expects);
  j["slot"] = p.slot;
  auto& arr = j["choices"] = nlohmann::json::array();
  for (const auto& c : p.choices) arr.push_back({{"id", c.id}, {"label", c.label}});
}

}  // namespace statz::advisor
