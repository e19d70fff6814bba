#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <random>
#include <thread>

#include "fixtures.hpp"
#include "protocol.hpp"
#include "statz/session/store.hpp"

namespace statz::session {
namespace {

using nlohmann::json;
using testing::LocalServer;
namespace fs = std::filesystem;

fs::path temp_dir(const std::string& tag) {
  std::random_device rd;
  auto p = fs::temp_directory_path() / ("statz-" + tag + "-" + std::to_string(rd()));
  fs::remove_all(p);
  return p;
}

json body(const httplib::Result& r) { return json::parse(r->body); }

std::string new_session(httplib::Client& c) { return body(c.Post("/sessions"))["id"]; }

httplib::Result say(httplib::Client& c, const std::string& id, const json& payload) {
  return c.Post("/sessions/" + id + "/messages", json{{"payload", payload}}.dump(), "application/json");
}

TEST(HttpTest, ScriptedProtocolMatchesReference) {
  LocalServer server;
  const auto report = testing::run_protocol(server.port());
  for (const auto& f : report.failures) ADD_FAILURE() << f;
  EXPECT_EQ(report.artifacts, 10u);
  EXPECT_GT(report.comparisons, 1000u);
  EXPECT_LE(report.worst_relative, 1e-6);
  EXPECT_LT(report.seconds, 10.0);
}

TEST(HttpTest, CreateGivesDistinctSessionsWithAGreeting) {
  LocalServer server;
  auto c = server.client();
  auto r1 = c.Post("/sessions");
  auto r2 = c.Post("/sessions");
  ASSERT_EQ(r1->status, 201);
  EXPECT_NE(body(r1)["id"], body(r2)["id"]);
  EXPECT_EQ(body(r1)["turn_index"], 0);
  EXPECT_EQ(r1->get_header_value("X-Turn-Index"), "0");
  auto t = c.Get("/sessions/" + body(r1)["id"].get<std::string>() + "/transcript");
  ASSERT_EQ(t->status, 200);
  EXPECT_EQ(body(t)["turns"].size(), 1u);
  EXPECT_EQ(body(t)["turns"][0]["author"], "agent");
}

TEST(HttpTest, ErrorsAreJson) {
  LocalServer server;
  auto c = server.client();
  auto missing = c.Get("/sessions/nope/transcript");
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(body(missing)["error"]["code"], "not_found");
  const auto id = new_session(c);
  auto art = c.Get("/sessions/" + id + "/artifacts/a7");
  EXPECT_EQ(art->status, 404);
  auto bad = c.Post("/sessions/" + id + "/messages", "{not json", "application/json");
  EXPECT_EQ(bad->status, 400);
  EXPECT_EQ(body(bad)["error"]["code"], "invalid_input");
  auto shape = say(c, id, json{{"x", 1}});
  EXPECT_EQ(shape->status, 400);
  auto nofile = c.Post("/sessions/" + id + "/dataset", httplib::MultipartFormDataItems{{"other", "a", "", ""}});
  EXPECT_EQ(nofile->status, 400);
  auto route = c.Get("/nowhere");
  EXPECT_EQ(route->status, 404);
  // None of the rejected requests added turns.
  EXPECT_EQ(body(c.Get("/sessions/" + id + "/transcript"))["turn_index"], 0);
}

TEST(HttpTest, RaggedUploadIsAnAgentTurn) {
  LocalServer server;
  auto c = server.client();
  const auto id = new_session(c);
  auto r = c.Post("/sessions/" + id + "/dataset",
                  httplib::MultipartFormDataItems{{"file", "a,b\n1,2\n3,4,5\n", "bad.csv", "text/csv"}});
  ASSERT_EQ(r->status, 200);
  const auto j = body(r);
  EXPECT_EQ(j["turn"]["payload"]["error"]["code"], "parse_error");
  EXPECT_NE(j["turn"]["payload"]["text"].get<std::string>().find("row 2"), std::string::npos);
}

TEST(HttpTest, RawBodyUploadIsAccepted) {
  LocalServer server;
  auto c = server.client();
  const auto id = new_session(c);
  auto r = c.Post("/sessions/" + id + "/dataset?filename=iris.csv", testing::iris_csv(), "text/csv");
  ASSERT_EQ(r->status, 200);
  EXPECT_EQ(body(r)["summary"]["rows"], 150);
}

TEST(HttpTest, CatalogListsFortyTwoMethods) {
  LocalServer server;
  auto c = server.client();
  auto r = c.Get("/catalog");
  ASSERT_EQ(r->status, 200);
  EXPECT_EQ(body(r)["methods"].size(), 42u);
}

TEST(HttpTest, ArtifactsKeepTheirMediaType) {
  LocalServer server;
  auto c = server.client();
  const auto id = new_session(c);
  c.Post("/sessions/" + id + "/dataset", httplib::MultipartFormDataItems{{"file", testing::iris_csv(), "iris.csv", ""}});
  const auto d = body(say(c, id, "describe petal_width"));
  const auto e = body(say(c, id, "export"));
  auto a1 = c.Get(d["artifact"]["url"].get<std::string>());
  auto a2 = c.Get(e["artifact"]["url"].get<std::string>());
  EXPECT_EQ(a1->get_header_value("Content-Type"), "application/json");
  EXPECT_EQ(a2->get_header_value("Content-Type"), "text/csv");
  EXPECT_EQ(a2->body, tabular::export_csv(tabular::import_csv(testing::iris_csv())));
  EXPECT_EQ(a2->get_header_value("X-Turn-Index"), std::to_string(e["turn_index"].get<int>()));
}

TEST(HttpTest, PersistedSessionsReloadIdentically) {
  const auto dir = temp_dir("persist");
  std::string id;
  std::vector<Artifact> original;
  std::vector<ChatTurn> turns;
  {
    LocalServer server(StoreConfig{.data_dir = dir});
    const auto report = testing::run_protocol(server.port());
    ASSERT_TRUE(report.ok());
    id = report.session_id;
    server.store().with_session(id, [&](Session& s) {
      original = s.artifacts();
      turns = s.transcript();
    });
  }
  ASSERT_TRUE(fs::exists(dir / "sessions" / (id + ".jsonl")));
  const auto persisted = SessionStore::read_transcript_file(dir / "sessions" / (id + ".jsonl"));
  EXPECT_EQ(persisted.artifacts, original);
  ASSERT_EQ(persisted.transcript.size(), turns.size());

  // A second server over the same directory rebuilds the session by replay.
  LocalServer again(StoreConfig{.data_dir = dir});
  auto c = again.client();
  auto t = c.Get("/sessions/" + id + "/transcript");
  ASSERT_EQ(t->status, 200);
  EXPECT_EQ(body(t)["turns"], json(turns));
  for (const auto& a : original) {
    auto r = c.Get("/sessions/" + id + "/artifacts/" + a.id);
    ASSERT_EQ(r->status, 200);
    EXPECT_EQ(r->body, a.content) << a.id;
  }
  // New turns continue the same file.
  say(c, id, "describe sepal_width");
  const auto grown = SessionStore::read_transcript_file(dir / "sessions" / (id + ".jsonl"));
  EXPECT_EQ(grown.transcript.size(), turns.size() + 2);
  EXPECT_EQ(grown.artifacts.size(), original.size() + 1);
  fs::remove_all(dir);
}

TEST(StoreTest, IdleSessionsExpire) {
  const auto dir = temp_dir("ttl");
  auto now = std::make_shared<Clock::time_point>(Clock::now());
  SessionStore store(StoreConfig{.data_dir = dir, .ttl = std::chrono::hours(1), .now = [now] { return *now; }});
  const auto a = store.create();
  *now += std::chrono::minutes(50);
  const auto b = store.create();
  *now += std::chrono::minutes(20);
  EXPECT_EQ(store.sweep(), 1u);
  EXPECT_THROW(store.with_session(a, [](Session&) {}), NotFound);
  EXPECT_NO_THROW(store.with_session(b, [](Session&) {}));
  EXPECT_FALSE(fs::exists(store.transcript_path(a)));
  EXPECT_EQ(store.size(), 1u);
  fs::remove_all(dir);
}

TEST(StoreTest, FifoMutexAdmitsInArrivalOrder) {
  FifoMutex m;
  std::vector<int> order;
  m.lock();
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] {
      m.lock();
      order.push_back(i);
      m.unlock();
    });
    while (m.queued() < static_cast<std::size_t>(i) + 2) std::this_thread::yield();
  }
  m.unlock();
  for (auto& t : threads) t.join();
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7}));
}

TEST(StoreTest, SameSessionRequestsAreSerialized) {
  LocalServer server;
  auto c = server.client();
  const auto id = new_session(c);
  c.Post("/sessions/" + id + "/dataset", httplib::MultipartFormDataItems{{"file", testing::iris_csv(), "iris.csv", ""}});
  const std::vector<std::string> columns{"sepal_length", "sepal_width", "petal_length", "petal_width"};
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] {
      auto cc = server.client();
      say(cc, id, "describe " + columns[static_cast<std::size_t>(i) % 4]);
    });
  }
  for (auto& t : threads) t.join();
  server.store().with_session(id, [&](Session& s) {
    const auto& tr = s.transcript();
    ASSERT_EQ(tr.size(), 3u + 16u);
    for (std::size_t i = 3; i < tr.size(); i += 2) {
      ASSERT_EQ(tr[i].author, Author::user);
      ASSERT_EQ(tr[i + 1].author, Author::agent);
      const std::string asked = tr[i].payload["text"];
      const auto art = s.artifact(tr[i + 1].payload["artifact"]["id"].get<std::string>());
      EXPECT_EQ(asked.substr(9), json::parse(art.content)["summaries"][0]["column"]);
    }
    EXPECT_EQ(s.artifacts().size(), 8u);
  });
}

TEST(StoreTest, DifferentSessionsDoNotInterfere) {
  LocalServer server;
  std::vector<std::string> ids(6);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    threads.emplace_back([&, i] {
      auto c = server.client();
      ids[i] = new_session(c);
      c.Post("/sessions/" + ids[i] + "/dataset",
             httplib::MultipartFormDataItems{{"file", testing::iris_csv(), "iris.csv", ""}});
      say(c, ids[i], "remove outliers");
      say(c, ids[i], "describe sepal_length");
    });
  }
  for (auto& t : threads) t.join();
  Session reference("ref");
  reference.upload_dataset(testing::iris_csv(), "iris.csv");
  reference.post_message("remove outliers");
  reference.post_message("describe sepal_length");
  for (const auto& id : ids) {
    server.store().with_session(id, [&](Session& s) { EXPECT_EQ(s.artifacts(), reference.artifacts()); });
  }
}

}  // namespace
}  // namespace statz::session
