#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "statz/error.hpp"
#include "statz/session/session.hpp"

namespace statz::session {

/// Mutex that admits waiters in arrival order.
class FifoMutex {
 public:
  void lock();
  void unlock();
  /// Holders plus waiters.
  std::size_t queued() const;

 private:
  mutable std::mutex m_;
  std::condition_variable cv_;
  std::uint64_t next_ = 0;
  std::uint64_t serving_ = 0;
};

using Clock = std::chrono::system_clock;

struct StoreConfig {
  /// Empty keeps everything in memory.
  std::filesystem::path data_dir;
  std::chrono::seconds ttl = std::chrono::hours(24);
  std::uint64_t seed = kDefaultSeed;
  std::function<Clock::time_point()> now = [] { return Clock::now(); };
};

/// Owns the live sessions. Requests for one session run one at a time in
/// arrival order; different sessions proceed in parallel.
///
/// Layout under data_dir: sessions/<id>.jsonl holds a header record followed
/// by one record per turn and per artifact, appended as they happen;
/// datasets/<sha256>.csv holds every uploaded file.
class SessionStore {
 public:
  explicit SessionStore(StoreConfig config = {});

  const StoreConfig& config() const noexcept { return config_; }

  /// New session with a random id; the greeting turn is already persisted.
  std::string create();

  /// Runs `f` with exclusive access to the session, then persists any new
  /// turns and artifacts. Sessions not in memory are reloaded from disk by
  /// replay. Throws NotFound for unknown or expired ids.
  template <class F>
  auto with_session(const std::string& id, F&& f) -> decltype(f(std::declval<Session&>())) {
    auto entry = find(id);
    std::lock_guard<FifoMutex> guard(entry->lock);
    if (!entry->session) throw NotFound("session '" + id + "' has expired");
    struct Persist {
      SessionStore* store;
      Entry* entry;
      ~Persist() { store->persist(*entry); }
    } persist{this, entry.get()};
    return f(*entry->session);
  }

  /// Stores upload bytes content-addressed; returns the digest.
  std::string save_dataset(std::string_view bytes);
  /// Bytes of a stored dataset; throws NotFound.
  std::string load_dataset(const std::string& sha256) const;

  /// Drops sessions idle for longer than the TTL (and their transcript
  /// files). Returns how many were dropped.
  std::size_t sweep();
  std::size_t size() const;

  /// Parses a persisted transcript file and replays it into a session.
  struct Persisted {
    std::string id;
    std::uint64_t seed = kDefaultSeed;
    std::vector<ChatTurn> transcript;
    std::vector<Artifact> artifacts;
  };
  static Persisted read_transcript_file(const std::filesystem::path& path);
  std::filesystem::path transcript_path(const std::string& id) const;

 private:
  struct Entry {
    FifoMutex lock;
    std::unique_ptr<Session> session;
    std::size_t persisted_turns = 0;
    std::size_t persisted_artifacts = 0;
    std::atomic<Clock::rep> last_used{0};
  };

  std::shared_ptr<Entry> find(const std::string& id);
  void persist(Entry& e);
  bool persistent() const { return !config_.data_dir.empty(); }

  StoreConfig config_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  /// Datasets held in memory when there is no data directory.
  std::map<std::string, std::string> memory_datasets_;
};

}  // namespace statz::session
