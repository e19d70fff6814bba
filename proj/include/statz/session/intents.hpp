#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "statz/advisor/dialogue.hpp"

namespace statz::session {

/// Words of a message after lower-casing and splitting on punctuation;
/// hyphens separate words ("t-test" -> "t", "test").
std::vector<std::string> normalize_words(std::string_view text);

/// Rule table shipped in data/intents.json.
class IntentTable {
 public:
  using Phrase = std::vector<std::string>;

  static IntentTable parse(std::string_view json_text);
  /// The table bundled with the build.
  static const IntentTable& bundled();

  /// First task (in table order) with a phrase in `words`; "menu" maps to
  /// Task::none with `menu` set.
  struct TaskMatch {
    advisor::Task task = advisor::Task::none;
    bool menu = false;
  };
  std::optional<TaskMatch> match_task(std::span<const std::string> words) const;
  /// Longest method phrase in `words`.
  std::optional<std::string> match_method(std::span<const std::string> words) const;
  std::optional<stats::PlotKind> match_plot(std::span<const std::string> words) const;
  /// Choice id for a slot answer, by longest alias match; nullopt when no
  /// alias matches or two choices tie.
  std::optional<std::string> match_answer(std::string_view slot, std::span<const std::string> words) const;
  bool is_vocabulary(std::string_view word) const;

 private:
  struct IntentRule {
    std::string task;
    std::vector<Phrase> phrases;
  };
  std::vector<IntentRule> intents_;
  std::vector<std::pair<std::string, std::vector<Phrase>>> methods_;
  std::vector<std::pair<std::string, std::vector<Phrase>>> plots_;
  std::map<std::string, std::vector<std::pair<std::string, std::vector<Phrase>>>, std::less<>> answers_;
  std::vector<std::string> vocabulary_;  // sorted
};

struct ParsedMessage {
  std::vector<std::string> words;
  std::optional<IntentTable::TaskMatch> task;
  std::optional<std::string> method;
  std::optional<stats::PlotKind> plot;
  std::optional<preprocess::ScalingMethod> scaling;
  /// Exact (case-insensitive) column mentions, in order of appearance.
  std::vector<std::string> columns;
  /// Tokens that look like misspelt column names, with their suggestions.
  std::vector<std::pair<std::string, std::vector<std::string>>> unresolved;
  std::vector<double> numbers;
  /// Column named right after "by".
  std::optional<std::string> by_column;
};

ParsedMessage parse_message(std::string_view text, const IntentTable& table,
                            std::span<const std::string> column_names);

}  // namespace statz::session
