#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "statz/advisor/dialogue.hpp"
#include "statz/session/intents.hpp"
#include "statz/tabular/dataset.hpp"

namespace statz::session {

enum class Author { user, agent };
const char* to_string(Author a) noexcept;

struct ChatTurn {
  std::size_t index = 0;
  Author author = Author::agent;
  std::int64_t timestamp_ms = 0;  // non-decreasing within a session
  /// user: {type: text|choice|file, ...}; agent: {type: reply, text, prompt,
  /// artifact?, error?, summary?}.
  nlohmann::json payload;
};

enum class ArtifactKind { test_result, descriptive, plot_data, dataset_export, recommendation };
const char* to_string(ArtifactKind k) noexcept;
std::optional<ArtifactKind> parse_artifact_kind(std::string_view s);

struct Artifact {
  std::string id;  // "a1", "a2", ...
  ArtifactKind kind = ArtifactKind::test_result;
  std::size_t turn = 0;  // agent turn that produced it
  /// Serialized payload: CSV for dataset_export, JSON text otherwise.
  std::string content;

  const char* media_type() const noexcept;
  friend bool operator==(const Artifact&, const Artifact&) = default;
};

void to_json(nlohmann::json& j, const ChatTurn& t);
ChatTurn turn_from_json(const nlohmann::json& j);

/// Reply to one user action: the agent turn and the artifact it produced.
struct Exchange {
  std::size_t user_turn = 0;
  std::size_t agent_turn = 0;
  std::optional<std::string> artifact_id;
};

/// Resolves a stored dataset by its SHA-256 hex digest (used on replay).
using DatasetLoader = std::function<std::string(const std::string& sha256)>;

inline constexpr std::uint64_t kDefaultSeed = 42;

/// One conversation: transcript, working dataset, artifacts and dialogue
/// state. Not thread-safe; SessionStore serializes access.
class Session {
 public:
  Session(std::string id, std::uint64_t seed = kDefaultSeed, const IntentTable& intents = IntentTable::bundled());

  const std::string& id() const noexcept { return id_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<ChatTurn>& transcript() const noexcept { return transcript_; }
  const std::vector<Artifact>& artifacts() const noexcept { return artifacts_; }
  /// Throws NotFound.
  const Artifact& artifact(std::string_view id) const;
  const std::optional<tabular::Dataset>& dataset() const noexcept { return dataset_; }
  const advisor::DialogueState& dialogue() const noexcept { return state_; }
  std::size_t turn_index() const noexcept { return transcript_.size() - 1; }

  /// `payload` is a string, {"text": ...} or {"choice": id}. Throws
  /// InvalidInput for any other shape; analysis errors become agent turns.
  Exchange post_message(const nlohmann::json& payload);
  /// Parse failures become an agent turn naming the offending row.
  Exchange upload_dataset(std::string_view bytes, std::string filename);

  /// Re-applies every user turn of `transcript` to a fresh session; turns keep
  /// their original timestamps.
  static Session replay(std::string id, std::uint64_t seed, const std::vector<ChatTurn>& transcript,
                        const DatasetLoader& load);

  /// Hex SHA-256 of the bytes, used to content-address datasets.
  static std::string digest(std::string_view bytes);

 private:
  struct Reply {
    std::string text;
    std::optional<std::pair<ArtifactKind, std::string>> artifact = std::nullopt;
    std::optional<nlohmann::json> error = std::nullopt;
    std::optional<nlohmann::json> summary = std::nullopt;
    /// Shown instead of next_prompt(state) when set.
    std::optional<advisor::GuidancePrompt> prompt = std::nullopt;
  };

  std::size_t append(Author author, nlohmann::json payload);
  Exchange respond(std::size_t user_turn, Reply reply);

  Reply handle_text(const std::string& text, std::optional<std::string> choice);
  bool apply_answer(const advisor::GuidancePrompt& prompt, const ParsedMessage& m,
                    const std::optional<std::string>& choice, Reply& clarification, bool switches);
  void start_task(advisor::Task task, const ParsedMessage& m);
  void absorb(const ParsedMessage& m);
  void refresh_groups();
  Reply advance();
  Reply run_task();

  Reply run_describe();
  Reply run_plot();
  Reply run_compare(bool execute);
  Reply run_normality();
  Reply run_correlate();
  Reply run_impute();
  Reply run_outliers();
  Reply run_reduce();
  Reply run_scale();
  Reply run_export();

  std::string id_;
  std::uint64_t seed_;
  const IntentTable* intents_;
  std::vector<ChatTurn> transcript_;
  std::vector<Artifact> artifacts_;
  std::optional<tabular::Dataset> dataset_;
  advisor::DialogueState state_;
  /// Prompt the last agent turn showed; answers are matched against it.
  advisor::GuidancePrompt prompt_;
  /// Misspelt column names from the message being handled.
  std::vector<std::pair<std::string, std::vector<std::string>>> unresolved_;
  std::int64_t last_timestamp_ = 0;
};

}  // namespace statz::session
