#include "statz/session/intents.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include <json.hpp>

#include "statz/error.hpp"
#include "statz/tabular/dataset.hpp"

namespace statz::session {

extern const char* const kBundledIntents;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_separator(char c) {
  return std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ';' || c == ':' || c == '!' || c == '?' ||
         c == '(' || c == ')' || c == '"' || c == '\'' || c == '[' || c == ']' || c == '{' || c == '}' || c == '=';
}

// Whitespace/punctuation tokens with case preserved; hyphens, dots and
// underscores stay inside tokens so column names and numbers survive.
std::vector<std::string> raw_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (is_separator(c)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  for (auto& t : out) {
    while (!t.empty() && (t.back() == '.' || t.back() == '-')) t.pop_back();
  }
  std::erase_if(out, [](const std::string& t) { return t.empty(); });
  return out;
}

std::optional<double> as_number(std::string_view t) {
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

// Length of `phrase` when it occurs in `words`, else 0.
std::size_t occurs(std::span<const std::string> words, const IntentTable::Phrase& phrase) {
  if (phrase.empty() || phrase.size() > words.size()) return 0;
  for (std::size_t i = 0; i + phrase.size() <= words.size(); ++i) {
    if (std::equal(phrase.begin(), phrase.end(), words.begin() + static_cast<std::ptrdiff_t>(i))) {
      return phrase.size();
    }
  }
  return 0;
}

std::vector<IntentTable::Phrase> phrases_of(const nlohmann::json& list) {
  std::vector<IntentTable::Phrase> out;
  for (const auto& p : list) out.push_back(normalize_words(p.get<std::string>()));
  return out;
}

template <typename Entries>
std::optional<std::string> longest(const Entries& entries, std::span<const std::string> words) {
  std::size_t best = 0;
  std::optional<std::string> id;
  bool tie = false;
  for (const auto& [key, phrases] : entries) {
    std::size_t len = 0;
    for (const auto& p : phrases) len = std::max(len, occurs(words, p));
    if (len == 0) continue;
    if (len > best) {
      best = len;
      id = key;
      tie = false;
    } else if (len == best && id != key) {
      tie = true;
    }
  }
  if (tie) return std::nullopt;
  return id;
}

}  // namespace

std::vector<std::string> normalize_words(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& tok : raw_tokens(text)) {
    if (as_number(tok)) {
      out.push_back(tok);
      continue;
    }
    std::string cur;
    for (char c : tok) {
      if (c == '-' || c == '/' || c == '.' || c == '_') {
        if (!cur.empty()) out.push_back(lower(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) out.push_back(lower(cur));
  }
  return out;
}

IntentTable IntentTable::parse(std::string_view json_text) {
  IntentTable t;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    for (const auto& rule : doc.at("intents")) {
      const auto task = rule.at("task").get<std::string>();
      if (task != "menu" && !advisor::parse_task(task)) throw SchemaError("intent table names unknown task '" + task + "'");
      t.intents_.push_back({task, phrases_of(rule.at("phrases"))});
    }
    for (const auto& [id, list] : doc.at("methods").items()) t.methods_.emplace_back(id, phrases_of(list));
    for (const auto& [id, list] : doc.at("plots").items()) t.plots_.emplace_back(id, phrases_of(list));
    for (const auto& [slot, choices] : doc.at("answers").items()) {
      auto& dst = t.answers_[slot];
      for (const auto& [id, list] : choices.items()) dst.emplace_back(id, phrases_of(list));
    }
    for (const auto& w : doc.at("stopwords")) t.vocabulary_.push_back(lower(w.get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed intent table: ") + e.what());
  }
  auto add = [&](const std::vector<Phrase>& phrases) {
    for (const auto& p : phrases) t.vocabulary_.insert(t.vocabulary_.end(), p.begin(), p.end());
  };
  for (const auto& r : t.intents_) add(r.phrases);
  for (const auto& [id, p] : t.methods_) add(p);
  for (const auto& [id, p] : t.plots_) add(p);
  for (const auto& [slot, choices] : t.answers_) {
    for (const auto& [id, p] : choices) add(p);
  }
  std::sort(t.vocabulary_.begin(), t.vocabulary_.end());
  t.vocabulary_.erase(std::unique(t.vocabulary_.begin(), t.vocabulary_.end()), t.vocabulary_.end());
  return t;
}

const IntentTable& IntentTable::bundled() {
  static const IntentTable t = parse(kBundledIntents);
  return t;
}

std::optional<IntentTable::TaskMatch> IntentTable::match_task(std::span<const std::string> words) const {
  for (const auto& rule : intents_) {
    for (const auto& p : rule.phrases) {
      if (occurs(words, p) == 0) continue;
      if (rule.task == "menu") return TaskMatch{advisor::Task::none, true};
      return TaskMatch{*advisor::parse_task(rule.task), false};
    }
  }
  return std::nullopt;
}

std::optional<std::string> IntentTable::match_method(std::span<const std::string> words) const {
  return longest(methods_, words);
}

std::optional<stats::PlotKind> IntentTable::match_plot(std::span<const std::string> words) const {
  const auto id = longest(plots_, words);
  if (!id) return std::nullopt;
  if (*id == "histogram") return stats::PlotKind::histogram;
  if (*id == "scatter") return stats::PlotKind::scatter;
  return stats::PlotKind::qq;
}

std::optional<std::string> IntentTable::match_answer(std::string_view slot, std::span<const std::string> words) const {
  const auto it = answers_.find(slot);
  if (it == answers_.end()) return std::nullopt;
  return longest(it->second, words);
}

bool IntentTable::is_vocabulary(std::string_view word) const {
  return std::binary_search(vocabulary_.begin(), vocabulary_.end(), word, std::less<>());
}

ParsedMessage parse_message(std::string_view text, const IntentTable& table,
                            std::span<const std::string> column_names) {
  ParsedMessage m;
  const auto tokens = raw_tokens(text);
  bool after_by = false;
  for (const auto& tok : tokens) {
    if (auto v = as_number(tok)) {
      m.numbers.push_back(*v);
      m.words.push_back(tok);
      after_by = false;
      continue;
    }
    const std::string low = lower(tok);
    const auto exact = std::find_if(column_names.begin(), column_names.end(),
                                    [&](const std::string& c) { return lower(c) == low; });
    if (exact != column_names.end()) {
      if (std::find(m.columns.begin(), m.columns.end(), *exact) == m.columns.end()) m.columns.push_back(*exact);
      if (after_by && !m.by_column) m.by_column = *exact;
      after_by = false;
      continue;
    }
    // Column mentions are kept out of the words so that a column called
    // "test_score" does not read as a request to test.
    const auto words = normalize_words(tok);
    m.words.insert(m.words.end(), words.begin(), words.end());
    after_by = low == "by";
    const bool looks_like_name = low.find('_') != std::string::npos || low.size() >= 5;
    if (!looks_like_name) continue;
    bool known = true;
    for (const auto& w : words) known = known && table.is_vocabulary(w);
    if (known) continue;
    auto suggestions = tabular::closest_names(tok, column_names);
    if (!suggestions.empty()) m.unresolved.emplace_back(tok, std::move(suggestions));
  }
  m.task = table.match_task(m.words);
  m.method = table.match_method(m.words);
  m.plot = table.match_plot(m.words);

  // Scaling methods: "min-max" / "z-score" / "l1" / "l2" in any spelling.
  for (std::size_t i = 0; i < m.words.size() && !m.scaling; ++i) {
    std::string two = m.words[i] + (i + 1 < m.words.size() ? m.words[i + 1] : std::string());
    for (const auto& candidate : {two, m.words[i]}) {
      if (auto s = preprocess::parse_scaling_method(candidate)) {
        if (candidate == "z" && (i + 1 >= m.words.size() || m.words[i + 1] != "score")) continue;
        m.scaling = s;
        break;
      }
    }
  }
  return m;
}

}  // namespace statz::session
