#include <gtest/gtest.h>

#include <httplib.h>

#include <thread>

#include "roadtones/error.hpp"
#include "roadtones/service.hpp"
#include "test_support.hpp"

namespace rt = roadtones;
using nlohmann::json;

namespace {

constexpr const char* kSummary =
    "A hatchback cuts across the bike lane at a junction and a cyclist swerves to avoid it.";

rt::RuntimeOptions mock_options() {
  rt::RuntimeOptions o;
  o.mock = true;
  o.data_dir = rt::testing::data_dir();
  return o;
}

class ServiceTest : public ::testing::Test {
 protected:
  ServiceTest() : runtime_(mock_options()), service_(runtime_) {}

  rt::ApiResponse post(const std::string& path, const json& body) const {
    return service_.handle("POST", path, body.dump());
  }

  rt::Runtime runtime_;
  rt::ApiService service_;
};

}  // namespace

TEST(ServiceStatus, ErrorCodesMapToHttp) {
  EXPECT_EQ(rt::http_status_for(rt::ErrorCode::kSchemaError), 400);
  EXPECT_EQ(rt::http_status_for(rt::ErrorCode::kUnknownAttribute), 400);
  EXPECT_EQ(rt::http_status_for(rt::ErrorCode::kRangeError), 400);
  EXPECT_EQ(rt::http_status_for(rt::ErrorCode::kNotFound), 404);
  EXPECT_EQ(rt::http_status_for(rt::ErrorCode::kTimeout), 502);
  EXPECT_EQ(rt::http_status_for(rt::ErrorCode::kAllCandidatesFailed), 502);
  EXPECT_EQ(rt::http_status_for(rt::ErrorCode::kIoError), 500);
}

TEST(ServiceStatus, ListenAddress) {
  EXPECT_EQ(rt::parse_listen_address("127.0.0.1:8080"), (std::pair<std::string, int>{"127.0.0.1", 8080}));
  EXPECT_THROW(rt::parse_listen_address("nohost"), rt::Error);
  EXPECT_THROW(rt::parse_listen_address("h:99999"), rt::Error);
}

TEST_F(ServiceTest, HealthAndInventory) {
  EXPECT_EQ(service_.handle("GET", "/healthz", "").json().at("status"), "ok");
  const auto inv = service_.handle("GET", "/api/inventory", "");
  ASSERT_EQ(inv.status, 200);
  const auto doc = inv.json();
  EXPECT_EQ(doc.at("counts").at("personality_traits"), 215);
  EXPECT_EQ(doc.at("counts").at("writing_styles"), 16);
  ASSERT_EQ(doc.at("bins").size(), 5u);
  EXPECT_EQ(doc.at("bins")[4].at("label"), "Very Strong");
  EXPECT_TRUE(doc.at("bins")[4].at("closed_hi").get<bool>());
  EXPECT_EQ(inv.headers.at("Access-Control-Allow-Origin"), "*");
}

TEST_F(ServiceTest, GenerateSampleSpec) {
  const json body{{"summary", kSummary}, {"spec", rt::testing::sample_spec_wire()}};
  const auto first = post("/api/generate", body);
  ASSERT_EQ(first.status, 200) << first.body;
  const auto doc = first.json();
  EXPECT_FALSE(doc.at("final").get<std::string>().empty());
  EXPECT_FALSE(doc.at("stage1").get<std::string>().empty());
  EXPECT_FALSE(doc.at("stage2").get<std::string>().empty());
  EXPECT_EQ(doc.at("provenance").at("stages").size(), 2u);
  EXPECT_TRUE(doc.contains("scores"));
  EXPECT_TRUE(doc.contains("provenance"));
  const auto second = post("/api/generate", body);
  EXPECT_EQ(second.body, first.body);
}

TEST_F(ServiceTest, GenerateSingleStageHasNoSecondDraft) {
  const json body{{"summary", kSummary}, {"spec", rt::testing::sample_spec_wire()}, {"mode", "single_stage"}, {"n", 1}};
  const auto res = post("/api/generate", body);
  ASSERT_EQ(res.status, 200) << res.body;
  EXPECT_TRUE(res.json().at("stage2").is_null());
}

TEST_F(ServiceTest, ValidationErrors) {
  auto spec = rt::testing::sample_spec_wire();
  spec["Personality"]["Telepathic"] = 0.5;
  const auto unknown = post("/api/generate", {{"summary", kSummary}, {"spec", spec}});
  EXPECT_EQ(unknown.status, 400);
  EXPECT_EQ(unknown.json().at("code"), "UnknownAttribute");

  EXPECT_EQ(post("/api/generate", {{"summary", kSummary}}).status, 400);
  EXPECT_EQ(post("/api/generate", {{"summary", kSummary}, {"spec", rt::testing::sample_spec_wire()}, {"n", 17}}).status, 400);
  EXPECT_EQ(post("/api/generate", {{"summary", kSummary}, {"spec", rt::testing::sample_spec_wire()}, {"extra", 1}}).status, 400);
  EXPECT_EQ(service_.handle("POST", "/api/score", "{not json").status, 400);
  auto zero_words = rt::testing::sample_spec_wire();
  zero_words["word_count"] = 0;
  EXPECT_EQ(post("/api/score", {{"caption", "c"}, {"summary", kSummary}, {"spec", zero_words}}).status, 400);
}

TEST_F(ServiceTest, RoutingErrors) {
  EXPECT_EQ(service_.handle("GET", "/api/nope", "").status, 404);
  const auto wrong = service_.handle("GET", "/api/generate", "");
  EXPECT_EQ(wrong.status, 405);
  EXPECT_EQ(wrong.json().at("code"), "MethodNotAllowed");
  EXPECT_EQ(service_.handle("OPTIONS", "/api/generate", "").status, 204);
}

TEST_F(ServiceTest, ExtractAndScore) {
  const std::string caption = "I saw a hatchback cut across the bike lane today \U0001F62C #BikeLife";
  const auto ex = post("/api/extract", {{"caption", caption}, {"summary", kSummary}});
  ASSERT_EQ(ex.status, 200) << ex.body;
  const auto profile = rt::profile_from_wire(ex.json(), rt::ProfileRole::kExtracted);
  EXPECT_TRUE(profile.structural.hashtags);
  EXPECT_EQ(profile.structural.word_count, 12);

  const auto sc = post("/api/score", {{"caption", caption}, {"summary", kSummary},
                                      {"spec", rt::testing::sample_spec_wire()}, {"scope", "writing_style"}});
  ASSERT_EQ(sc.status, 200) << sc.body;
  const auto report = rt::score_report_from_json(sc.json());
  EXPECT_TRUE(rt::satisfies_identities(report));
  EXPECT_FALSE(report.s_p.has_value());
}

TEST_F(ServiceTest, ProviderFailureIs502) {
  auto options = mock_options();
  options.mock_options.failing_tasks = {rt::tasks::kExtractStructural};
  rt::Runtime failing(options);
  rt::ApiService service(failing);
  const auto res = service.handle("POST", "/api/extract", json{{"caption", "c"}, {"summary", kSummary}}.dump());
  EXPECT_EQ(res.status, 502);
  EXPECT_EQ(res.json().at("component"), "providers");
}

TEST_F(ServiceTest, HttpRoundTrip) {
  rt::HttpServer server(service_);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread thread([&] { server.listen(); });
  httplib::Client client("127.0.0.1", port);
  const auto health = client.Get("/healthz");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  const json body{{"summary", kSummary}, {"spec", rt::testing::sample_spec_wire()}};
  const auto res = client.Post("/api/generate", body.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, post("/api/generate", body).body);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
  const auto missing = client.Get("/nowhere");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  server.stop();
  thread.join();
}
