// statz-server: the session HTTP API.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "statz/session/http.hpp"

namespace {

std::atomic<statz::session::HttpServer*> g_server{nullptr};

void on_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conversational statistics session server"};
  std::string bind = env_or("STATZ_BIND", "127.0.0.1:8080");
  std::string data_dir = env_or("STATZ_DATA_DIR", "statz-data");
  long ttl = std::stol(env_or("STATZ_SESSION_TTL", "86400"));
  std::uint64_t seed = statz::session::kDefaultSeed;
  app.add_option("--bind", bind, "host:port to listen on; port 0 picks one (env STATZ_BIND)")->capture_default_str();
  app.add_option("--data-dir", data_dir, "Transcript and dataset directory (env STATZ_DATA_DIR)")
      ->capture_default_str();
  app.add_option("--ttl", ttl, "Idle seconds before a session expires (env STATZ_SESSION_TTL)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed for new sessions")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "error: --bind must be host:port\n";
    return 2;
  }
  const std::string host = bind.substr(0, colon);
  const int port = std::stoi(bind.substr(colon + 1));

  statz::session::SessionStore store({.data_dir = data_dir, .ttl = std::chrono::seconds(ttl), .seed = seed});
  statz::session::HttpServer server(store);
  int bound = 0;
  try {
    bound = server.bind(host, port);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  std::atomic<bool> running{true};
  std::thread sweeper([&] {
    const auto period = std::chrono::seconds(std::clamp<long>(ttl / 4, 1, 60));
    auto next = std::chrono::steady_clock::now() + period;
    while (running) {
      std::this_thread::sleep_for(std::chrono::milliseconds(200));
      if (std::chrono::steady_clock::now() < next) continue;
      next += period;
      if (const auto n = store.sweep()) std::cerr << "expired " << n << " idle session(s)\n";
    }
  });

  std::cout << "listening on http://" << host << ":" << bound << " (data in " << data_dir << ")" << std::endl;
  server.serve();
  running = false;
  sweeper.join();
  g_server = nullptr;
  return 0;
}
