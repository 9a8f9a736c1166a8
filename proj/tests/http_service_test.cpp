#include "mindguide/http_service.hpp"

#include <gtest/gtest.h>

#include <future>

#include "mindguide/transcript.hpp"
#include "support/gate_backend.hpp"
#include "support/service_harness.hpp"

using namespace mindguide;
using nlohmann::json;
using support::ServiceHarness;

namespace {

std::string error_code(const httplib::Result& res) {
  return json::parse(res->body).at("error").at("code").get<std::string>();
}

}  // namespace

TEST(HttpService, CreateSession) {
  ServiceHarness svc(std::make_shared<ScriptedBackend>());
  auto res = svc.client().Post("/api/sessions", "", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);
  const auto body = json::parse(res->body);
  EXPECT_FALSE(body.at("session_id").get<std::string>().empty());
  EXPECT_EQ(body.at("welcome").at("role"), "ai");
  EXPECT_EQ(body.at("welcome").at("content").get<std::string>().rfind("Welcome! to your therapy session", 0), 0u);

  res = svc.client().Post("/api/sessions", R"({"persona_id":"mindguide"})", "application/json");
  EXPECT_EQ(res->status, 201);
  res = svc.client().Post("/api/sessions", R"({"persona_id":"nonexistent"})", "application/json");
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(error_code(res), "unknown_persona");
  res = svc.client().Post("/api/sessions", "{not json", "application/json");
  EXPECT_EQ(res->status, 400);
}

TEST(HttpService, MessageFlow) {
  ServiceHarness svc(std::make_shared<ScriptedBackend>(std::vector<std::string>{"I hear you."}));
  const auto id = svc.create_session();
  auto res = svc.post(id, "I feel anxious");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body), (json{{"reply", {{"role", "ai"}, {"content", "I hear you."}}}}));

  const auto hist = svc.history(id);
  ASSERT_EQ(hist.size(), 3u);
  EXPECT_EQ(hist[1], (json{{"role", "human"}, {"content", "I feel anxious"}}));
  EXPECT_EQ(hist[2], (json{{"role", "ai"}, {"content", "I hear you."}}));
}

TEST(HttpService, ErrorMapping) {
  ServiceHarness svc(std::make_shared<ScriptedBackend>());
  const auto id = svc.create_session();

  auto res = svc.post("unknown", "hi");
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(error_code(res), "unknown_session");

  res = svc.post(id, "   ");
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(error_code(res), "empty_message");

  res = svc.client().Post("/api/sessions/" + id + "/messages", "[]", "application/json");
  EXPECT_EQ(res->status, 400);
  res = svc.client().Post("/api/sessions/" + id + "/messages", R"({"content": 3})", "application/json");
  EXPECT_EQ(res->status, 400);

  res = svc.post(id, "hello");  // script is empty
  EXPECT_EQ(res->status, 502);
  const auto err = json::parse(res->body).at("error");
  EXPECT_EQ(err.at("code"), "upstream_error");
  EXPECT_EQ(err.at("upstream"), "script_exhausted");
  EXPECT_FALSE(err.at("message").get<std::string>().empty());

  EXPECT_EQ(svc.client().Get("/api/sessions/unknown/history")->status, 404);
}

TEST(HttpService, Busy) {
  auto gate = std::make_shared<support::GateBackend>();
  ServiceHarness svc(gate);
  const auto id = svc.create_session();
  auto first = std::async(std::launch::async, [&] {
    httplib::Client c("127.0.0.1", svc.client().port());
    return c.Post("/api/sessions/" + id + "/messages", R"({"content":"one"})", "application/json")->status;
  });
  gate->wait_entered();
  auto res = svc.post(id, "two");
  EXPECT_EQ(res->status, 409);
  EXPECT_EQ(error_code(res), "session_busy");
  gate->release();
  EXPECT_EQ(first.get(), 200);
}

TEST(HttpService, Delete) {
  ServiceHarness svc(std::make_shared<ScriptedBackend>());
  const auto id = svc.create_session();
  EXPECT_EQ(svc.client().Delete("/api/sessions/" + id)->status, 204);
  EXPECT_EQ(svc.client().Get("/api/sessions/" + id + "/history")->status, 404);
  auto again = svc.client().Delete("/api/sessions/" + id);
  EXPECT_EQ(again->status, 404);
  EXPECT_EQ(error_code(again), "unknown_session");
  EXPECT_EQ(read_transcript(svc.sessions().transcript_path(id)).size(), 1u);
}

TEST(HttpService, ServesStaticFiles) {
  support::TempDir ui;
  support::write_file(ui / "index.html", "<html>chat</html>");
  ServiceHarness svc(std::make_shared<ScriptedBackend>(), ui.path());
  auto res = svc.client().Get("/");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, "<html>chat</html>");
  EXPECT_EQ(svc.client().Post("/api/sessions", "", "application/json")->status, 201);
}

TEST(HttpService, UnicodeRoundTrip) {
  const std::string reply = "Je comprends 💛\n— {ok}";
  ServiceHarness svc(std::make_shared<ScriptedBackend>(std::vector<std::string>{reply}));
  const auto id = svc.create_session();
  auto res = svc.post(id, "ça va? 你好 \"quoted\"");
  ASSERT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body).at("reply").at("content"), reply);
  EXPECT_EQ(svc.history(id)[1].at("content"), "ça va? 你好 \"quoted\"");
}
