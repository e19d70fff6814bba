#pragma once

#include <memory>
#include <string>

#include "statz/session/store.hpp"

namespace httplib {
class Server;
}

namespace statz::session {

/// JSON API over a SessionStore:
///
///   POST /sessions                        -> {id, turn, turn_index}
///   POST /sessions/{id}/messages          {payload} -> {turn, artifact?, turn_index}
///   POST /sessions/{id}/dataset           multipart "file" -> {turn, summary, turn_index}
///   GET  /sessions/{id}/transcript        -> {id, turns, artifacts, turn_index}
///   GET  /sessions/{id}/artifacts/{aid}   -> stored content (CSV or JSON)
///   GET  /catalog                         -> method catalog
///
/// Session responses carry the index of the session's latest turn both in
/// the body (turn_index) and in an X-Turn-Index header. Errors are
/// {error: {code, message}} with 400, 404 or 500.
class HttpServer {
 public:
  explicit HttpServer(SessionStore& store);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port; throws on failure.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void serve();
  void stop();

 private:
  void routes();

  SessionStore& store_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace statz::session
