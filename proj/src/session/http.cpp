#include "statz/session/http.hpp"

#include <httplib.h>

#include "statz/advisor/catalog.hpp"
#include "statz/error.hpp"

namespace statz::session {

using nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, int status, const json& body, std::optional<std::size_t> turn = std::nullopt) {
  json out = body;
  if (turn) {
    out["turn_index"] = *turn;
    res.set_header("X-Turn-Index", std::to_string(*turn));
  }
  res.status = status;
  res.set_content(out.dump(), kJson);
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_found:
    case ErrorCode::unknown_method:
      return 404;
    default:
      return 400;
  }
}

json artifact_ref(const std::string& session, const Artifact& a) {
  return {{"id", a.id},
          {"kind", to_string(a.kind)},
          {"turn", a.turn},
          {"media_type", a.media_type()},
          {"url", "/sessions/" + session + "/artifacts/" + a.id}};
}

// Runs a handler and maps exceptions onto JSON error responses.
template <class F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    send(res, status_for(e.code()), {{"error", {{"code", to_string(e.code())}, {"message", e.what()}}}});
  } catch (const json::exception& e) {
    send(res, 400, {{"error", {{"code", "invalid_input"}, {"message", std::string("malformed JSON: ") + e.what()}}}});
  } catch (const std::exception& e) {
    send(res, 500, {{"error", {{"code", "internal"}, {"message", e.what()}}}});
  }
}

}  // namespace

HttpServer::HttpServer(SessionStore& store) : store_(store), server_(std::make_unique<httplib::Server>()) {
  routes();
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound <= 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::serve() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

void HttpServer::routes() {
  auto& s = *server_;

  s.Post("/sessions", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      const auto id = store_.create();
      store_.with_session(id, [&](Session& session) {
        send(res, 201, {{"id", id}, {"turn", session.transcript().back()}}, session.turn_index());
      });
    });
  });

  s.Post("/sessions/:id/messages", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = json::parse(req.body);
      const json payload = body.is_object() && body.contains("payload") ? body["payload"] : body;
      store_.with_session(req.path_params.at("id"), [&](Session& session) {
        const auto ex = session.post_message(payload);
        json out{{"turn", session.transcript().at(ex.agent_turn)}, {"user_turn", ex.user_turn}};
        if (ex.artifact_id) out["artifact"] = artifact_ref(session.id(), session.artifact(*ex.artifact_id));
        send(res, 200, out, session.turn_index());
      });
    });
  });

  s.Post("/sessions/:id/dataset", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::string bytes;
      std::string filename = "upload.csv";
      if (req.has_file("file")) {
        const auto f = req.get_file_value("file");
        bytes = f.content;
        if (!f.filename.empty()) filename = f.filename;
      } else if (!req.is_multipart_form_data() && !req.body.empty()) {
        bytes = req.body;
        if (req.has_param("filename")) filename = req.get_param_value("filename");
      } else {
        throw InvalidInput("expected a multipart form with a 'file' field");
      }
      store_.save_dataset(bytes);
      store_.with_session(req.path_params.at("id"), [&](Session& session) {
        const auto ex = session.upload_dataset(bytes, filename);
        const auto& turn = session.transcript().at(ex.agent_turn);
        json out{{"turn", turn}, {"user_turn", ex.user_turn}};
        out["summary"] = turn.payload.value("summary", json());
        send(res, 200, out, session.turn_index());
      });
    });
  });

  s.Get("/sessions/:id/transcript", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      store_.with_session(req.path_params.at("id"), [&](Session& session) {
        json artifacts = json::array();
        for (const auto& a : session.artifacts()) artifacts.push_back(artifact_ref(session.id(), a));
        send(res, 200, {{"id", session.id()}, {"seed", session.seed()}, {"turns", session.transcript()},
                        {"artifacts", artifacts}},
             session.turn_index());
      });
    });
  });

  s.Get("/sessions/:id/artifacts/:aid", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      store_.with_session(req.path_params.at("id"), [&](Session& session) {
        const auto& a = session.artifact(req.path_params.at("aid"));
        res.status = 200;
        res.set_header("X-Turn-Index", std::to_string(session.turn_index()));
        res.set_header("X-Artifact-Kind", to_string(a.kind));
        res.set_content(a.content, a.media_type());
      });
    });
  });

  s.Get("/catalog", [](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send(res, 200, json(advisor::catalog())); });
  });

  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      json body{{"error", {{"code", res.status == 404 ? "not_found" : "http"}, {"message", "no such route"}}}};
      res.set_content(body.dump(), kJson);
    }
  });
}

}  // namespace statz::session
