#include "statz/session/store.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "statz/error.hpp"

namespace statz::session {

namespace fs = std::filesystem;
using nlohmann::json;

void FifoMutex::lock() {
  std::unique_lock<std::mutex> l(m_);
  const auto ticket = next_++;
  cv_.wait(l, [&] { return serving_ == ticket; });
}

void FifoMutex::unlock() {
  {
    std::lock_guard<std::mutex> l(m_);
    ++serving_;
  }
  cv_.notify_all();
}

std::size_t FifoMutex::queued() const {
  std::lock_guard<std::mutex> l(m_);
  return static_cast<std::size_t>(next_ - serving_);
}

namespace {

std::string random_id() {
  static std::mutex m;
  static std::random_device rd;
  std::lock_guard<std::mutex> l(m);
  std::uniform_int_distribution<unsigned> nibble(0, 15);
  static const char* hex = "0123456789abcdef";
  std::string id;
  for (int i = 0; i < 32; ++i) id.push_back(hex[nibble(rd)]);
  return id;
}

bool valid_id(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') return false;
  }
  return true;
}

void append_lines(const fs::path& path, const std::string& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  out << lines;
  out.flush();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

SessionStore::SessionStore(StoreConfig config) : config_(std::move(config)) {
  if (persistent()) {
    fs::create_directories(config_.data_dir / "sessions");
    fs::create_directories(config_.data_dir / "datasets");
  }
}

fs::path SessionStore::transcript_path(const std::string& id) const {
  return config_.data_dir / "sessions" / (id + ".jsonl");
}

std::string SessionStore::create() {
  auto entry = std::make_shared<Entry>();
  std::string id;
  {
    std::lock_guard<std::mutex> l(mu_);
    do {
      id = random_id();
    } while (sessions_.count(id) || (persistent() && fs::exists(transcript_path(id))));
    entry->session = std::make_unique<Session>(id, config_.seed);
    entry->last_used = config_.now().time_since_epoch().count();
    sessions_.emplace(id, entry);
  }
  std::lock_guard<FifoMutex> guard(entry->lock);
  if (persistent()) {
    append_lines(transcript_path(id), json{{"record", "session"}, {"id", id}, {"seed", config_.seed}}.dump() + "\n");
  }
  persist(*entry);
  return id;
}

std::shared_ptr<SessionStore::Entry> SessionStore::find(const std::string& id) {
  std::lock_guard<std::mutex> l(mu_);
  if (auto it = sessions_.find(id); it != sessions_.end()) {
    it->second->last_used = config_.now().time_since_epoch().count();
    return it->second;
  }
  if (!persistent() || !valid_id(id) || !fs::exists(transcript_path(id))) {
    throw NotFound("no session '" + id + "'");
  }
  const auto p = read_transcript_file(transcript_path(id));
  auto entry = std::make_shared<Entry>();
  entry->session = std::make_unique<Session>(
      Session::replay(id, p.seed, p.transcript, [this](const std::string& sha) { return load_dataset(sha); }));
  entry->persisted_turns = p.transcript.size();
  entry->persisted_artifacts = p.artifacts.size();
  entry->last_used = config_.now().time_since_epoch().count();
  sessions_.emplace(id, entry);
  return entry;
}

void SessionStore::persist(Entry& e) {
  const auto& s = *e.session;
  e.last_used = config_.now().time_since_epoch().count();
  if (!persistent()) {
    e.persisted_turns = s.transcript().size();
    e.persisted_artifacts = s.artifacts().size();
    return;
  }
  std::string lines;
  for (std::size_t i = e.persisted_turns; i < s.transcript().size(); ++i) {
    json j = s.transcript()[i];
    j["record"] = "turn";
    lines += j.dump() + "\n";
  }
  for (std::size_t i = e.persisted_artifacts; i < s.artifacts().size(); ++i) {
    const auto& a = s.artifacts()[i];
    lines += json{{"record", "artifact"}, {"id", a.id}, {"kind", to_string(a.kind)}, {"turn", a.turn},
                  {"content", a.content}}
                 .dump() +
             "\n";
  }
  if (!lines.empty()) append_lines(transcript_path(s.id()), lines);
  e.persisted_turns = s.transcript().size();
  e.persisted_artifacts = s.artifacts().size();
}

SessionStore::Persisted SessionStore::read_transcript_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open " + path.string());
  Persisted p;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(lineno - 1, lineno, path.string() + ": " + e.what());
    }
    const auto record = j.value("record", "");
    if (record == "session") {
      p.id = j.at("id").get<std::string>();
      p.seed = j.at("seed").get<std::uint64_t>();
    } else if (record == "turn") {
      p.transcript.push_back(turn_from_json(j));
    } else if (record == "artifact") {
      Artifact a;
      a.id = j.at("id").get<std::string>();
      const auto kind = parse_artifact_kind(j.at("kind").get<std::string>());
      if (!kind) throw SchemaError(path.string() + ": unknown artifact kind on line " + std::to_string(lineno));
      a.kind = *kind;
      a.turn = j.at("turn").get<std::size_t>();
      a.content = j.at("content").get<std::string>();
      p.artifacts.push_back(std::move(a));
    } else {
      throw SchemaError(path.string() + ": unknown record on line " + std::to_string(lineno));
    }
  }
  return p;
}

std::string SessionStore::save_dataset(std::string_view bytes) {
  const auto sha = Session::digest(bytes);
  if (!persistent()) {
    std::lock_guard<std::mutex> l(mu_);
    memory_datasets_.emplace(sha, std::string(bytes));
    return sha;
  }
  const auto path = config_.data_dir / "datasets" / (sha + ".csv");
  if (!fs::exists(path)) {
    const auto tmp = path.string() + ".tmp" + random_id();
    {
      std::ofstream out(tmp, std::ios::binary);
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    fs::rename(tmp, path);
  }
  return sha;
}

std::string SessionStore::load_dataset(const std::string& sha256) const {
  if (!persistent()) {
    std::lock_guard<std::mutex> l(mu_);
    if (auto it = memory_datasets_.find(sha256); it != memory_datasets_.end()) return it->second;
    throw NotFound("no dataset " + sha256);
  }
  std::ifstream in(config_.data_dir / "datasets" / (sha256 + ".csv"), std::ios::binary);
  if (!in) throw NotFound("no dataset " + sha256);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t SessionStore::sweep() {
  std::vector<std::shared_ptr<Entry>> expired;
  {
    std::lock_guard<std::mutex> l(mu_);
    const auto cutoff = (config_.now() - config_.ttl).time_since_epoch().count();
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      if (it->second->last_used < cutoff) {
        if (persistent()) {
          std::error_code ec;
          fs::remove(transcript_path(it->first), ec);
        }
        expired.push_back(it->second);
        it = sessions_.erase(it);
      } else {
        ++it;
      }
    }
  }
  // Requests already queued on an expired session see it as gone.
  for (auto& e : expired) {
    std::lock_guard<FifoMutex> guard(e->lock);
    e->session.reset();
  }
  return expired.size();
}

std::size_t SessionStore::size() const {
  std::lock_guard<std::mutex> l(mu_);
  return sessions_.size();
}

}  // namespace statz::session
