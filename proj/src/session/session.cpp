#include "statz/session/session.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "statz/advisor/catalog.hpp"
#include "statz/error.hpp"
#include "statz/preprocess/isolation_forest.hpp"
#include "statz/preprocess/pca.hpp"
#include "statz/preprocess/transform.hpp"
#include "statz/stats/descriptive.hpp"
#include "statz/stats/repeated.hpp"
#include "statz/stats/tests.hpp"
#include "statz/tabular/csv.hpp"

namespace statz::session {

using advisor::Task;
using nlohmann::json;

const char* to_string(Author a) noexcept { return a == Author::user ? "user" : "agent"; }

const char* to_string(ArtifactKind k) noexcept {
  switch (k) {
    case ArtifactKind::test_result: return "test_result";
    case ArtifactKind::descriptive: return "descriptive";
    case ArtifactKind::plot_data: return "plot_data";
    case ArtifactKind::dataset_export: return "dataset_export";
    case ArtifactKind::recommendation: return "recommendation";
  }
  return "test_result";
}

std::optional<ArtifactKind> parse_artifact_kind(std::string_view s) {
  for (auto k : {ArtifactKind::test_result, ArtifactKind::descriptive, ArtifactKind::plot_data,
                 ArtifactKind::dataset_export, ArtifactKind::recommendation}) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

const char* Artifact::media_type() const noexcept {
  return kind == ArtifactKind::dataset_export ? "text/csv" : "application/json";
}

void to_json(json& j, const ChatTurn& t) {
  j = {{"index", t.index}, {"author", to_string(t.author)}, {"timestamp", t.timestamp_ms}, {"payload", t.payload}};
}

ChatTurn turn_from_json(const json& j) {
  ChatTurn t;
  t.index = j.at("index").get<std::size_t>();
  t.author = j.at("author").get<std::string>() == "user" ? Author::user : Author::agent;
  t.timestamp_ms = j.at("timestamp").get<std::int64_t>();
  t.payload = j.at("payload");
  return t;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string method_name(const std::string& id) {
  const auto* e = advisor::catalog().find(id);
  return e ? e->name : id;
}

std::string decision(const stats::TestResult& r) {
  return r.reject_null ? "Reject the null hypothesis at alpha = " + fmt(r.alpha) + "."
                       : "Do not reject the null hypothesis at alpha = " + fmt(r.alpha) + ".";
}

std::string describe_result(const stats::TestResult& r) {
  std::string s = method_name(r.method) + ": statistic = " + fmt(r.statistic);
  if (r.df) {
    s += ", df = " + fmt(r.df->first);
    if (r.df->second) s += ", " + fmt(*r.df->second);
  }
  return s + ", p = " + fmt(r.p_value) + ". " + decision(r);
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += (i + 1 == v.size()) ? " and " : ", ";
    out += v[i];
  }
  return out;
}

std::string remedy(const Error& e) {
  const std::string what = e.what();
  switch (e.code()) {
    case ErrorCode::invalid_input:
      if (what.find("impute") != std::string::npos) return " Say 'impute' to fill the missing values first.";
      if (what.find("not numeric") != std::string::npos) return " Choose a numeric column.";
      return "";
    case ErrorCode::too_few_observations: return " Choose columns with more observations.";
    case ErrorCode::degenerate_input: return " The data has no variation where the method needs some.";
    case ErrorCode::unsupported_size: return " Try a smaller sample.";
    default: return "";
  }
}

json error_json(const Error& e) {
  json j{{"code", to_string(e.code())}, {"message", e.what()}};
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    j["row"] = pe->row();
    j["line"] = pe->line();
  }
  if (const auto* uc = dynamic_cast<const UnknownColumn*>(&e)) j["suggestions"] = uc->suggestions();
  return j;
}

bool matches_label(const advisor::Choice& c, const std::vector<std::string>& words) {
  return words == normalize_words(c.id) || words == normalize_words(c.label);
}

std::vector<std::string> numeric_names(const tabular::Dataset& d) {
  std::vector<std::string> out;
  for (const auto& c : d.columns()) {
    if (c.is_numeric()) out.push_back(c.name());
  }
  return out;
}

const tabular::Column& numeric(const tabular::Dataset& d, const std::string& name) {
  const auto& c = d.column(name);
  if (!c.is_numeric()) throw InvalidInput("column '" + name + "' is not numeric");
  return c;
}

// Rows where every named column has a value.
std::vector<std::vector<double>> complete_rows(const tabular::Dataset& d, const std::vector<std::string>& names) {
  std::vector<const tabular::Column*> cols;
  for (const auto& n : names) cols.push_back(&numeric(d, n));
  std::vector<std::vector<double>> out(cols.size());
  for (std::size_t r = 0; r < d.rows(); ++r) {
    bool ok = true;
    for (const auto* c : cols) ok = ok && !c->is_missing(r);
    if (!ok) continue;
    for (std::size_t j = 0; j < cols.size(); ++j) out[j].push_back(cols[j]->number(r));
  }
  return out;
}

json with_columns(json j, const std::vector<std::string>& columns) {
  j["columns"] = columns;
  return j;
}

}  // namespace

Session::Session(std::string id, std::uint64_t seed, const IntentTable& intents)
    : id_(std::move(id)), seed_(seed), intents_(&intents) {
  prompt_ = advisor::next_prompt(state_);
  append(Author::agent, {{"type", "reply"}, {"text", prompt_.text}, {"prompt", prompt_}});
}

const Artifact& Session::artifact(std::string_view id) const {
  for (const auto& a : artifacts_) {
    if (a.id == id) return a;
  }
  throw NotFound("no artifact '" + std::string(id) + "' in session " + id_);
}

std::size_t Session::append(Author author, json payload) {
  const auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
  last_timestamp_ = std::max<std::int64_t>(last_timestamp_, now);
  ChatTurn t;
  t.index = transcript_.size();
  t.author = author;
  t.timestamp_ms = last_timestamp_;
  t.payload = std::move(payload);
  transcript_.push_back(std::move(t));
  return transcript_.back().index;
}

Exchange Session::respond(std::size_t user_turn, Reply reply) {
  prompt_ = reply.prompt ? *reply.prompt : advisor::next_prompt(state_);
  json payload{{"type", "reply"}, {"text", reply.text}, {"prompt", prompt_}};
  Exchange ex;
  ex.user_turn = user_turn;
  const std::size_t agent_turn = transcript_.size();
  if (reply.artifact) {
    Artifact a;
    a.id = "a" + std::to_string(artifacts_.size() + 1);
    a.kind = reply.artifact->first;
    a.turn = agent_turn;
    a.content = std::move(reply.artifact->second);
    payload["artifact"] = {{"id", a.id}, {"kind", to_string(a.kind)}};
    ex.artifact_id = a.id;
    artifacts_.push_back(std::move(a));
  }
  if (reply.error) payload["error"] = *reply.error;
  if (reply.summary) payload["summary"] = *reply.summary;
  ex.agent_turn = append(Author::agent, std::move(payload));
  return ex;
}

Exchange Session::post_message(const json& payload) {
  std::string text;
  std::optional<std::string> choice;
  if (payload.is_string()) {
    text = payload.get<std::string>();
  } else if (payload.is_object() && payload.contains("choice") && payload["choice"].is_string()) {
    choice = payload["choice"].get<std::string>();
    text = *choice;
  } else if (payload.is_object() && payload.contains("text") && payload["text"].is_string()) {
    text = payload["text"].get<std::string>();
  } else {
    throw InvalidInput("message payload must be a string, {\"text\": ...} or {\"choice\": ...}");
  }
  const std::size_t user = choice ? append(Author::user, {{"type", "choice"}, {"choice", *choice}})
                                  : append(Author::user, {{"type", "text"}, {"text", text}});
  return respond(user, handle_text(text, choice));
}

Exchange Session::upload_dataset(std::string_view bytes, std::string filename) {
  const std::string sha = digest(bytes);
  const std::size_t user =
      append(Author::user, {{"type", "file"}, {"filename", filename}, {"sha256", sha}, {"bytes", bytes.size()}});
  Reply r;
  try {
    auto d = tabular::import_csv(bytes);
    std::size_t numeric_count = 0;
    json types = json::array();
    std::vector<std::string> parts;
    for (const auto& c : d.columns()) {
      numeric_count += c.is_numeric();
      types.push_back({{"name", c.name()}, {"kind", tabular::to_string(c.kind())}, {"missing", c.missing_count()}});
      parts.push_back(c.name() + " (" + tabular::to_string(c.kind()) + ")");
    }
    r.text = "Loaded " + filename + ": " + std::to_string(d.rows()) + " rows and " + std::to_string(d.cols()) +
             " columns: " + join(parts) + ".";
    r.summary = json{{"rows", d.rows()}, {"columns", d.cols()}, {"column_types", types}, {"sha256", sha}};
    dataset_ = std::move(d);
    state_ = {};
    state_.has_dataset = true;
  } catch (const ParseError& e) {
    r.text = "I could not read " + filename + ": data row " + std::to_string(e.row() + 1) + " (line " +
             std::to_string(e.line()) + "): " + e.what() + ". Fix the file and upload it again.";
    r.error = error_json(e);
  } catch (const Error& e) {
    r.text = "I could not read " + filename + ": " + e.what() + ".";
    r.error = error_json(e);
  }
  return respond(user, std::move(r));
}

Session::Reply Session::handle_text(const std::string& text, std::optional<std::string> choice) {
  const std::vector<std::string> names = dataset_ ? dataset_->names() : std::vector<std::string>{};
  const auto m = parse_message(text, *intents_, names);
  unresolved_ = m.unresolved;

  if (m.task && m.task->menu) {
    state_ = {};
    state_.has_dataset = dataset_.has_value();
    return {.text = "Here is what I can help with."};
  }

  if (state_.task != Task::none) {
    std::optional<Task> task;
    if (m.task) task = m.task->task;
    else if (m.method) task = Task::compare;
    // Naming a different analysis starts it; otherwise the message answers the question.
    const bool switches = !choice && ((task && *task != state_.task) || (m.method && m.method != state_.method));
    Reply clarification;
    if (apply_answer(prompt_, m, choice, clarification, switches)) return advance();
    if (!clarification.text.empty()) return clarification;
    if (task) {
      start_task(*task, m);
      return advance();
    }
    return {.text = "Sorry, I did not understand that. " + prompt_.text, .prompt = prompt_};
  }

  std::optional<Task> task;
  if (prompt_.slot == "task") {
    for (const auto& c : prompt_.choices) {
      if ((choice && *choice == c.id) || matches_label(c, m.words)) task = advisor::parse_task(c.id);
    }
  }
  if (!task && m.task) task = m.task->task;
  if (!task && m.method) task = Task::compare;
  if (!task) {
    return {.text = dataset_ ? "Sorry, I did not understand that. Pick one of the tasks below."
                             : "Sorry, I did not understand that. Start by uploading a CSV file."};
  }
  start_task(*task, m);
  return advance();
}

void Session::start_task(Task task, const ParsedMessage& m) {
  state_ = {};
  state_.has_dataset = dataset_.has_value();
  state_.task = task;
  if (m.method) {
    if (*m.method == "shapiro_wilk" && task != Task::advise) {
      state_.task = Task::normality;
    } else if (*m.method == "pearson" || *m.method == "spearman") {
      if (task != Task::advise) state_.task = Task::correlate;
    } else if (task == Task::compare || task == Task::correlate || task == Task::normality || task == Task::describe) {
      state_.task = Task::compare;
    }
    if (state_.task != Task::advise) state_.method = m.method;
    if (*m.method == "paired_t" || *m.method == "wilcoxon_signed" || *m.method == "friedman") state_.paired = true;
    if (*m.method == "welch_t" || *m.method == "pooled_t" || *m.method == "mann_whitney" ||
        *m.method == "kruskal_wallis" || *m.method == "one_way_anova" || *m.method == "levene") {
      state_.paired = false;
    }
  }
  absorb(m);
}

void Session::absorb(const ParsedMessage& m) {
  for (const auto& c : m.columns) {
    if (m.by_column && c == *m.by_column) continue;
    if (std::find(state_.columns.begin(), state_.columns.end(), c) == state_.columns.end()) state_.columns.push_back(c);
  }
  if (dataset_ && (state_.task == Task::compare || state_.task == Task::advise)) {
    std::optional<std::string> by = m.by_column;
    // A categorical column among the mentions defines the groups.
    for (const auto& c : state_.columns) {
      if (!by && !dataset_->column(c).is_numeric()) by = c;
    }
    if (by && !dataset_->column(*by).is_numeric()) {
      state_.group_by = *by;
      std::erase(state_.columns, *by);
      state_.paired = false;
    }
  }
  if (m.plot) state_.plot = m.plot;
  if (m.scaling) state_.scaling = m.scaling;
  if (!m.numbers.empty()) {
    const double v = m.numbers.front();
    switch (state_.task) {
      case Task::compare:
      case Task::advise:
        if (!state_.group_by && state_.columns.size() <= 1) state_.reference_mean = v;
        break;
      case Task::reduce:
        if (v >= 1 && v == std::floor(v)) state_.components = static_cast<std::size_t>(v);
        break;
      case Task::outliers:
        if (v > 0 && v < 0.5) state_.contamination = v;
        break;
      case Task::plot:
        if (v >= 1 && v == std::floor(v)) state_.bins = static_cast<int>(v);
        break;
      default:
        break;
    }
  }
  refresh_groups();
}

void Session::refresh_groups() {
  if (state_.task != Task::compare && state_.task != Task::advise) return;
  if (state_.group_by && dataset_) {
    state_.n_groups = dataset_->column(*state_.group_by).levels().size();
  } else if (state_.columns.size() >= 2) {
    state_.n_groups = state_.columns.size();
  } else if (state_.columns.size() == 1 && state_.reference_mean) {
    state_.n_groups = 1;
  }
}

bool Session::apply_answer(const advisor::GuidancePrompt& prompt, const ParsedMessage& m,
                           const std::optional<std::string>& choice, Reply& clarification, bool switches) {
  const std::string& slot = prompt.slot;
  std::optional<std::string> id;
  for (const auto& c : prompt.choices) {
    if ((choice && *choice == c.id) || matches_label(c, m.words)) id = c.id;
  }
  if (!id && !prompt.choices.empty() && !choice) {
    if (slot == "scaling" && m.scaling) id = preprocess::to_string(*m.scaling);
    else if (slot == "plot" && m.plot) id = stats::to_string(*m.plot);
    else if (slot != "columns") id = intents_->match_answer(slot, m.words);
  }
  if (!id && switches) return false;

  if (slot == "paired" && id) {
    state_.paired = *id == "paired";
    return true;
  }
  if (slot == "n_groups" && id) {
    state_.n_groups = static_cast<std::size_t>(std::stoul(*id));
    refresh_groups();
    return true;
  }
  if (slot == "normality" && id) {
    state_.normality = *id == "normal" ? advisor::Normality::normal
                       : *id == "non_normal" ? advisor::Normality::non_normal
                                             : advisor::Normality::unknown;
    return true;
  }
  if (slot == "equal_variance" && id) {
    state_.equal_variance = *id == "yes" ? advisor::EqualVariance::yes
                            : *id == "no" ? advisor::EqualVariance::no
                                          : advisor::EqualVariance::unknown;
    return true;
  }
  if (slot == "scaling" && id) {
    state_.scaling = preprocess::parse_scaling_method(*id);
    return true;
  }
  if (slot == "plot" && id) {
    state_.plot = *id == "histogram" ? stats::PlotKind::histogram
                  : *id == "scatter" ? stats::PlotKind::scatter
                                     : stats::PlotKind::qq;
    return true;
  }
  if (slot == "columns") {
    if (id && dataset_ && dataset_->index_of(*id)) {
      ParsedMessage picked;
      picked.columns.push_back(*id);
      absorb(picked);
      unresolved_.clear();
      return true;
    }
    if (!m.columns.empty()) {
      absorb(m);
      return true;
    }
    if (!m.unresolved.empty()) return false;
  }
  if (slot == "reference_mean" && !m.numbers.empty()) {
    state_.reference_mean = m.numbers.front();
    refresh_groups();
    return true;
  }
  if (slot == "components" && !m.numbers.empty()) {
    const double v = m.numbers.front();
    const std::size_t p = state_.columns.empty() ? numeric_names(*dataset_).size() : state_.columns.size();
    if (v >= 1 && v == std::floor(v) && v <= static_cast<double>(p)) {
      state_.components = static_cast<std::size_t>(v);
      return true;
    }
    clarification = {.text = "Please give a whole number of dimensions between 1 and " + std::to_string(p) + ".",
                     .prompt = prompt};
    return false;
  }
  if (slot == "file" && !m.task) {
    clarification = {.text = "Use the upload button (or drag and drop) to send a CSV file.", .prompt = prompt};
  }
  return false;
}

Session::Reply Session::advance() {
  if (!dataset_ && state_.task != Task::advise && state_.task != Task::import_data) {
    state_ = {};
    return {.text = "Please upload a dataset first."};
  }
  if (!unresolved_.empty()) {
    const auto& [token, suggestions] = unresolved_.front();
    advisor::GuidancePrompt p{"I could not find a column named '" + token + "'. Did you mean '" +
                                  suggestions.front() + "'?",
                              {},
                              advisor::Expects::choice,
                              "columns"};
    for (const auto& s : suggestions) p.choices.push_back({s, s});
    p.choices.push_back({"menu", "Something else (back to the menu)"});
    unresolved_.clear();
    return {.text = p.text, .prompt = p};
  }
  if (auto q = advisor::pending_question(state_)) return {.text = q->text, .prompt = *q};
  Reply r;
  try {
    r = run_task();
  } catch (const Incomplete& e) {
    r = {.text = e.question(), .error = error_json(e)};
  } catch (const UnknownColumn& e) {
    r = {.text = std::string(e.what()) + ".", .error = error_json(e)};
  } catch (const Error& e) {
    r = {.text = "I could not complete that: " + std::string(e.what()) + "." + remedy(e), .error = error_json(e)};
  }
  state_ = {};
  state_.has_dataset = dataset_.has_value();
  return r;
}

Session::Reply Session::run_task() {
  switch (state_.task) {
    case Task::describe: return run_describe();
    case Task::plot: return run_plot();
    case Task::compare: return run_compare(true);
    case Task::advise: return run_compare(false);
    case Task::normality: return run_normality();
    case Task::correlate: return run_correlate();
    case Task::impute: return run_impute();
    case Task::outliers: return run_outliers();
    case Task::reduce: return run_reduce();
    case Task::scale: return run_scale();
    case Task::export_data: return run_export();
    case Task::import_data:
    case Task::none: break;
  }
  return {.text = "Pick one of the tasks below."};
}

Session::Reply Session::run_describe() {
  json summaries = json::array();
  std::vector<std::string> lines;
  for (const auto& name : state_.columns) {
    const auto& c = dataset_->column(name);
    if (!c.is_numeric()) {
      json counts = json::object();
      for (const auto& level : c.levels()) counts[level] = 0;
      for (std::size_t r = 0; r < c.size(); ++r) {
        if (!c.is_missing(r)) counts[c.label(r)] = counts[c.label(r)].get<int>() + 1;
      }
      summaries.push_back({{"column", name}, {"kind", tabular::to_string(c.kind())},
                           {"n", c.size() - c.missing_count()}, {"levels", counts}});
      lines.push_back(name + ": " + std::to_string(c.levels().size()) + " levels");
      continue;
    }
    const auto s = stats::describe(c);
    json j = s;
    j["column"] = name;
    j["kind"] = "numeric";
    summaries.push_back(std::move(j));
    lines.push_back(name + ": mean " + fmt(s.mean) + ", median " + fmt(s.median) + ", sd " + fmt(s.sd) + ", n = " +
                    std::to_string(s.n));
  }
  std::string text = "Descriptive statistics. ";
  for (const auto& l : lines) text += l + ". ";
  text.pop_back();
  return {.text = text, .artifact = std::make_pair(ArtifactKind::descriptive, json{{"summaries", summaries}}.dump())};
}

Session::Reply Session::run_plot() {
  const auto kind = *state_.plot;
  stats::PlotData p;
  std::vector<std::string> used;
  if (kind == stats::PlotKind::scatter) {
    used = {state_.columns[0], state_.columns[1]};
    p = stats::plot_data(kind, {&numeric(*dataset_, used[0]), &numeric(*dataset_, used[1])});
  } else {
    used = {state_.columns[0]};
    p = stats::plot_data(kind, {&numeric(*dataset_, used[0])}, {.bins = state_.bins});
  }
  json j = p;
  j["columns"] = used;
  const std::string what = kind == stats::PlotKind::histogram ? "Histogram"
                           : kind == stats::PlotKind::scatter ? "Scatter plot"
                                                              : "Q-Q plot";
  return {.text = what + " of " + join(used) + " is ready.",
          .artifact = std::make_pair(ArtifactKind::plot_data, j.dump())};
}

Session::Reply Session::run_compare(bool execute) {
  const auto& d = *dataset_;
  std::vector<std::vector<double>> groups;
  std::vector<std::string> labels;
  if (state_.group_by) {
    const auto& values = numeric(d, state_.columns.at(0));
    const auto& by = d.column(*state_.group_by);
    labels = by.levels();
    groups.resize(labels.size());
    for (std::size_t r = 0; r < d.rows(); ++r) {
      if (values.is_missing(r) || by.is_missing(r)) continue;
      const auto it = std::find(labels.begin(), labels.end(), by.label(r));
      groups[static_cast<std::size_t>(it - labels.begin())].push_back(values.number(r));
    }
  } else {
    labels = state_.columns;
    if (state_.paired.value_or(false)) {
      groups = complete_rows(d, state_.columns);
    } else {
      for (const auto& n : state_.columns) groups.push_back(numeric(d, n).present());
    }
  }
  const std::size_t k = groups.size();

  // Design answers the user left open are settled by running the checks.
  json checks = json::array();
  std::optional<advisor::Recommendation> rec;
  std::string method;
  if (state_.method) {
    method = *state_.method;
  } else {
    auto design = advisor::descriptor(state_);
    design.n_groups = k;
    for (int round = 0; round < 3; ++round) {
      rec = advisor::recommend_test(design);
      if (rec->committed()) break;
      for (const auto& pre : rec->prerequisites) {
        if (pre.method_id == "shapiro_wilk") {
          bool normal = true;
          auto check = [&](const std::vector<double>& x, const std::string& target) {
            const auto r = stats::shapiro_wilk(x);
            normal = normal && !r.reject_null;
            checks.push_back({{"method_id", "shapiro_wilk"}, {"target", target}, {"result", r}});
          };
          if (pre.scope == "differences") {
            const auto rows = complete_rows(d, state_.columns);
            std::vector<double> diff(rows[0].size());
            for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = rows[0][i] - rows[1][i];
            check(diff, labels[0] + " - " + labels[1]);
          } else {
            check(groups.at(*pre.group), labels.at(*pre.group));
          }
          if (pre.scope == "differences" || *pre.group + 1 == k) {
            design.normality = normal ? advisor::Normality::normal : advisor::Normality::non_normal;
          } else if (!normal) {
            design.normality = advisor::Normality::non_normal;
          }
        } else if (pre.method_id == "levene") {
          const auto r = stats::levene(groups);
          checks.push_back({{"method_id", "levene"}, {"target", join(labels)}, {"result", r}});
          design.equal_variance = r.reject_null ? advisor::EqualVariance::no : advisor::EqualVariance::yes;
        }
      }
      // Partial per-group results only settle normality once every group ran.
      if (design.normality == advisor::Normality::unknown) design.normality = advisor::Normality::normal;
    }
    if (!rec->committed()) throw Incomplete("I could not settle the design; please answer the questions directly.");
    method = *rec->method_id;
  }

  std::string check_text;
  for (const auto& c : checks) {
    check_text += method_name(c["method_id"]) + " on " + c["target"].get<std::string>() + ": p = " +
                  fmt(c["result"]["p_value"].get<double>()) + ". ";
  }

  if (!execute) {
    json j = *rec;
    j["checks"] = checks;
    j["columns"] = state_.columns;
    return {.text = check_text + "I recommend the " + method_name(method) + ". " + rec->rationale,
            .artifact = std::make_pair(ArtifactKind::recommendation, j.dump())};
  }

  auto need = [&](std::size_t n) {
    if (k != n) {
      throw InvalidInput(method_name(method) + " needs exactly " + std::to_string(n) + " groups, got " +
                         std::to_string(k));
    }
  };
  auto paired_columns = [&]() {
    if (state_.group_by) throw InvalidInput(method_name(method) + " needs paired columns, not groups of one column");
    return complete_rows(d, state_.columns);
  };
  stats::TestResult result;
  json extra = json::object();
  if (method == "one_sample_t" || (method == "wilcoxon_signed" && k == 1)) {
    need(1);
    if (!state_.reference_mean) throw Incomplete("Which reference mean should the sample be compared against?");
    const double mu = *state_.reference_mean;
    if (method == "one_sample_t") {
      result = stats::t_test_one_sample(groups[0], mu);
    } else {
      result = stats::wilcoxon_signed(groups[0], std::vector<double>(groups[0].size(), mu));
    }
    extra["reference_mean"] = mu;
  } else if (method == "welch_t" || method == "pooled_t") {
    need(2);
    result = stats::t_test_independent(groups[0], groups[1], {.equal_var = method == "pooled_t"});
  } else if (method == "paired_t") {
    const auto rows = paired_columns();
    if (rows.size() != 2) need(2);
    result = stats::t_test_paired(rows[0], rows[1]);
  } else if (method == "wilcoxon_signed") {
    const auto rows = paired_columns();
    if (rows.size() != 2) need(2);
    result = stats::wilcoxon_signed(rows[0], rows[1]);
  } else if (method == "mann_whitney") {
    need(2);
    result = stats::mann_whitney(groups[0], groups[1]);
  } else if (method == "kruskal_wallis") {
    result = stats::kruskal_wallis(groups);
  } else if (method == "one_way_anova") {
    result = stats::one_way_anova(groups);
  } else if (method == "levene") {
    result = stats::levene(groups);
  } else if (method == "friedman") {
    const auto m = stats::Matrix::from_columns(paired_columns(), labels);
    result = stats::friedman(m);
    extra["kendalls_w"] = stats::kendalls_w(m);
    extra["posthoc"] = stats::nemenyi(m);
  } else {
    throw InvalidInput(method_name(method) + " is not a comparison of groups");
  }

  json j = result;
  j["columns"] = state_.columns;
  j["groups"] = labels;
  if (state_.group_by) j["group_by"] = *state_.group_by;
  if (rec) j["recommendation"] = *rec;
  j["checks"] = checks;
  for (const auto& [key, value] : extra.items()) j[key] = value;
  std::string text = check_text;
  if (rec) text += rec->rationale + " ";
  text += describe_result(result);
  return {.text = text, .artifact = std::make_pair(ArtifactKind::test_result, j.dump())};
}

Session::Reply Session::run_normality() {
  const auto& name = state_.columns.front();
  const auto r = stats::shapiro_wilk(numeric(*dataset_, name).present());
  std::string text = describe_result(r) + (r.reject_null ? " The data deviate from a normal distribution."
                                                         : " No evidence against normality.");
  if (state_.columns.size() > 1) text += " Only " + name + " was tested; ask again for the other columns.";
  return {.text = text,
          .artifact = std::make_pair(ArtifactKind::test_result, with_columns(json(r), {name}).dump())};
}

Session::Reply Session::run_correlate() {
  const auto& d = *dataset_;
  for (const auto& c : state_.columns) numeric(d, c);
  json checks = json::array();
  std::optional<advisor::Recommendation> rec;
  std::string method;
  if (state_.method) {
    method = *state_.method;
  } else {
    auto design = advisor::descriptor(state_);
    design.n_groups = state_.columns.size();
    rec = advisor::recommend_test(design);
    if (!rec->committed()) {
      bool normal = true;
      for (const auto& c : state_.columns) {
        const auto r = stats::shapiro_wilk(d.column(c).present());
        normal = normal && !r.reject_null;
        checks.push_back({{"method_id", "shapiro_wilk"}, {"target", c}, {"result", r}});
      }
      design.normality = normal ? advisor::Normality::normal : advisor::Normality::non_normal;
      rec = advisor::recommend_test(design);
    }
    method = *rec->method_id;
    if (method == "correlation_matrix") method = rec->parameters.at("method");
  }
  const auto cm = method == "pearson" ? stats::CorrelationMethod::pearson : stats::CorrelationMethod::spearman;
  std::string text;
  for (const auto& c : checks) {
    text += "Shapiro-Wilk on " + c["target"].get<std::string>() + ": p = " +
            fmt(c["result"]["p_value"].get<double>()) + ". ";
  }
  if (rec) text += rec->rationale + " ";
  json j;
  if (state_.columns.size() == 2) {
    const auto r = stats::correlation(cm, d.column(state_.columns[0]), d.column(state_.columns[1]));
    j = r;
    text += method_name(method) + ": coefficient = " + fmt(r.coefficient) + ", p = " + fmt(r.p_value) + " (n = " +
            std::to_string(r.n) + ").";
  } else {
    const std::size_t k = state_.columns.size();
    std::vector<std::vector<double>> coef(k, std::vector<double>(k, 1.0));
    std::vector<std::vector<double>> p(k, std::vector<double>(k, 0.0));
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        const auto r = stats::correlation(cm, d.column(state_.columns[a]), d.column(state_.columns[b]));
        coef[a][b] = coef[b][a] = r.coefficient;
        p[a][b] = p[b][a] = r.p_value;
      }
    }
    j = {{"method", "correlation_matrix"}, {"correlation_method", method}, {"coefficients", coef}, {"p_values", p}};
    text += "Correlation matrix (" + method_name(method) + ") for " + join(state_.columns) + " is ready.";
  }
  j["columns"] = state_.columns;
  if (rec) j["recommendation"] = *rec;
  j["checks"] = checks;
  return {.text = text, .artifact = std::make_pair(ArtifactKind::test_result, j.dump())};
}

Session::Reply Session::run_impute() {
  const auto targets = state_.columns.empty() ? numeric_names(*dataset_) : state_.columns;
  std::size_t filled = 0;
  for (const auto& c : targets) filled += numeric(*dataset_, c).missing_count();
  dataset_ = preprocess::impute_mean(*dataset_, targets);
  return {.text = "Mean imputation filled " + std::to_string(filled) + " missing cells in " + join(targets) + ".",
          .artifact = std::make_pair(ArtifactKind::dataset_export, tabular::export_csv(*dataset_))};
}

Session::Reply Session::run_outliers() {
  preprocess::ForestParams params;
  params.seed = seed_;
  if (state_.contamination) params.contamination = *state_.contamination;
  const auto targets = state_.columns.empty() ? numeric_names(*dataset_) : state_.columns;
  const std::size_t before = dataset_->rows();
  dataset_ = preprocess::remove_outliers(*dataset_, targets, params);
  return {.text = "Isolation Forest (" + std::to_string(params.n_trees) + " trees, contamination " +
                  fmt(params.contamination) + ") removed " + std::to_string(before - dataset_->rows()) + " of " +
                  std::to_string(before) + " rows using " + join(targets) + ".",
          .artifact = std::make_pair(ArtifactKind::dataset_export, tabular::export_csv(*dataset_))};
}

Session::Reply Session::run_reduce() {
  const auto targets = state_.columns.empty() ? numeric_names(*dataset_) : state_.columns;
  const auto r = preprocess::pca(*dataset_, targets, *state_.components);
  auto out = r.transformed;
  for (const auto& c : dataset_->columns()) {
    if (std::find(targets.begin(), targets.end(), c.name()) == targets.end() && !out.index_of(c.name())) {
      out = out.with_column(c);
    }
  }
  std::vector<std::string> ratios;
  for (double v : r.explained_variance_ratio) ratios.push_back(fmt(v));
  return {.text = "PCA reduced " + std::to_string(targets.size()) + " columns to " +
                  std::to_string(*state_.components) + " components; explained variance ratios " + join(ratios) + ".",
          .artifact = std::make_pair(ArtifactKind::dataset_export, tabular::export_csv(out))};
}

Session::Reply Session::run_scale() {
  const auto method = *state_.scaling;
  auto d = *dataset_;
  for (const auto& c : state_.columns) d = d.with_column(preprocess::scale(d.column(c), method));
  dataset_ = std::move(d);
  return {.text = std::string(preprocess::label(method)) + " applied to " + join(state_.columns) + ".",
          .artifact = std::make_pair(ArtifactKind::dataset_export, tabular::export_csv(*dataset_))};
}

Session::Reply Session::run_export() {
  return {.text = "Exported the working dataset (" + std::to_string(dataset_->rows()) + " rows, " +
                  std::to_string(dataset_->cols()) + " columns).",
          .artifact = std::make_pair(ArtifactKind::dataset_export, tabular::export_csv(*dataset_))};
}

Session Session::replay(std::string id, std::uint64_t seed, const std::vector<ChatTurn>& transcript,
                        const DatasetLoader& load) {
  Session s(std::move(id), seed);
  for (const auto& t : transcript) {
    if (t.author != Author::user) continue;
    const auto& p = t.payload;
    const auto type = p.at("type").get<std::string>();
    if (type == "file") {
      s.upload_dataset(load(p.at("sha256").get<std::string>()), p.at("filename").get<std::string>());
    } else if (type == "choice") {
      s.post_message(json{{"choice", p.at("choice")}});
    } else {
      s.post_message(p.at("text"));
    }
  }
  // The replayed turns line up one for one with the originals.
  for (std::size_t i = 0; i < s.transcript_.size() && i < transcript.size(); ++i) {
    s.transcript_[i].timestamp_ms = transcript[i].timestamp_ms;
  }
  if (!s.transcript_.empty()) s.last_timestamp_ = s.transcript_.back().timestamp_ms;
  return s;
}

std::string Session::digest(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

}  // namespace statz::session
