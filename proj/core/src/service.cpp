#include "roadtones/service.hpp"

#include <charconv>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "roadtones/metrics.hpp"
#include "roadtones/tcgen.hpp"

namespace roadtones {
namespace {

constexpr const char* kComponent = "service";

Error bad_request(const std::string& message) { return Error(ErrorCode::kSchemaError, kComponent, message); }

std::string required_string(const nlohmann::json& body, const char* key) {
  if (!body.contains(key)) throw bad_request(std::string("missing field '") + key + "'");
  if (!body[key].is_string()) throw bad_request(std::string("field '") + key + "' must be a string");
  auto value = body[key].get<std::string>();
  if (value.empty()) throw bad_request(std::string("field '") + key + "' must not be empty");
  return value;
}

void require_keys(const nlohmann::json& body, std::initializer_list<const char*> allowed) {
  for (const auto& item : body.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw bad_request("unknown field '" + item.key() + "'");
  }
}

ApiResponse json_response(int status, const nlohmann::ordered_json& doc) {
  return {status, doc.dump(), {{"Content-Type", "application/json"}}};
}

}  // namespace

int http_status_for(ErrorCode code) noexcept {
  if (is_provider_error(code)) return 502;
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kAllCandidatesFailed:
      return 502;
    case ErrorCode::kSchemaError:
    case ErrorCode::kRangeError:
    case ErrorCode::kUnknownAttribute:
    case ErrorCode::kDegenerateTarget:
    case ErrorCode::kPreconditionFailed:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    default:
      return 500;
  }
}

nlohmann::ordered_json api_error_json(const Error& error) {
  nlohmann::ordered_json doc;
  doc["code"] = std::string(to_string(error.code()));
  doc["message"] = error.what();
  doc["component"] = error.component();
  return doc;
}

nlohmann::ordered_json generation_response_json(const GenerationResult& result) {
  auto stage_caption = [&](int stage) -> nlohmann::ordered_json {
    for (const auto& s : result.stages) {
      if (s.stage == stage) return s.best().text;
    }
    return nullptr;
  };
  nlohmann::ordered_json doc;
  doc["final"] = result.final_candidate.text;
  doc["final_stage"] = result.final_candidate.stage;
  doc["stage1"] = stage_caption(1);
  doc["stage2"] = stage_caption(2);
  doc["scores"] = to_json(result.final_candidate.report);
  doc["provenance"] = to_json(result);
  return doc;
}

ApiService::ApiService(Runtime& runtime, ServiceOptions options)
    : runtime_(runtime), options_(std::move(options)) {}

ApiResponse ApiService::handle(std::string_view method, std::string_view path, std::string_view body) const {
  ApiResponse response;
  try {
    const bool is_post = method == "POST";
    const bool is_get = method == "GET";
    auto parse_body = [&] {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(body);
      } catch (const nlohmann::json::exception&) {
        throw bad_request("request body is not valid JSON");
      }
      if (!doc.is_object()) throw bad_request("request body must be a JSON object");
      return doc;
    };

    if (method == "OPTIONS") {
      response = {204, "", {}};
    } else if (path == "/healthz" && is_get) {
      response = json_response(200, {{"status", "ok"}});
    } else if (path == "/api/inventory" && is_get) {
      response = json_response(200, inventory());
    } else if (path == "/api/extract" && is_post) {
      response = json_response(200, extract(parse_body()));
    } else if (path == "/api/generate" && is_post) {
      response = json_response(200, generate(parse_body()));
    } else if (path == "/api/score" && is_post) {
      response = json_response(200, score(parse_body()));
    } else if (path == "/healthz" || path == "/api/inventory" || path == "/api/extract" ||
               path == "/api/generate" || path == "/api/score") {
      response = json_response(405, {{"code", "MethodNotAllowed"},
                                     {"message", std::string(method) + " not allowed on " + std::string(path)},
                                     {"component", kComponent}});
    } else {
      response = json_response(
          404, api_error_json(Error(ErrorCode::kNotFound, kComponent, "no route for " + std::string(path))));
    }
  } catch (const Error& e) {
    response = json_response(http_status_for(e.code()), api_error_json(e));
  } catch (const std::exception& e) {
    response = json_response(500, {{"code", "InternalError"}, {"message", e.what()}, {"component", kComponent}});
  }
  response.headers["Access-Control-Allow-Origin"] = options_.cors_origin;
  response.headers["Access-Control-Allow-Methods"] = "GET, POST, OPTIONS";
  response.headers["Access-Control-Allow-Headers"] = "Content-Type";
  return response;
}

ToneProfile ApiService::checked_spec(const nlohmann::json& body) const {
  if (!body.contains("spec")) throw bad_request("missing field 'spec'");
  ToneProfile spec = profile_from_wire(body["spec"], ProfileRole::kTarget);
  validate_profile(spec, runtime_.inventory());
  return spec;
}

nlohmann::ordered_json ApiService::extract(const nlohmann::json& body) const {
  require_keys(body, {"caption", "summary"});
  const auto caption = required_string(body, "caption");
  const auto summary = required_string(body, "summary");
  return to_wire(runtime_.extractor().extract_tone_profile(caption, summary));
}

nlohmann::ordered_json ApiService::generate(const nlohmann::json& body) const {
  require_keys(body, {"summary", "spec", "mode", "n"});
  const auto summary = required_string(body, "summary");
  const ToneProfile spec = checked_spec(body);
  std::optional<GenerationMode> mode;
  if (body.contains("mode")) mode = generation_mode_from_string(required_string(body, "mode"));
  std::optional<int> n;
  if (body.contains("n")) {
    if (!body["n"].is_number_integer() || body["n"].get<int>() < 1 || body["n"].get<int>() > 16) {
      throw bad_request("field 'n' must be an integer in [1,16]");
    }
    n = body["n"].get<int>();
  }

  const auto generator = runtime_.generator(mode, n);
  return generation_response_json(generator.generate(summary, spec));
}

nlohmann::ordered_json ApiService::score(const nlohmann::json& body) const {
  require_keys(body, {"caption", "summary", "spec", "scope"});
  const auto caption = required_string(body, "caption");
  const auto summary = required_string(body, "summary");
  const ToneProfile spec = checked_spec(body);
  NarrativeScope scope = NarrativeScope::kFull;
  if (body.contains("scope")) scope = narrative_scope_from_string(required_string(body, "scope"));
  return to_json(runtime_.evaluator().score_caption(caption, summary, spec, scope).report);
}

nlohmann::ordered_json ApiService::inventory() const {
  const auto& inv = runtime_.inventory();
  nlohmann::ordered_json doc = inv.to_json();
  doc["counts"] = {{"personality_traits", inv.personality_traits().size()},
                   {"writing_styles", inv.writing_styles().size()}};
  auto bins = nlohmann::ordered_json::array();
  for (auto level : {IntensityLevel::kAbsent, IntensityLevel::kSubtle, IntensityLevel::kModerate,
                     IntensityLevel::kStrong, IntensityLevel::kVeryStrong}) {
    const auto range = bin_range(level);
    bins.push_back({{"label", std::string(display_label(level))},
                    {"lo", range.lo},
                    {"hi", range.hi},
                    {"closed_hi", range.closed_hi}});
  }
  doc["bins"] = std::move(bins);
  return doc;
}

// ---------------------------------------------------------------------------

struct HttpServer::Impl {
  explicit Impl(const ApiService& s) : service(s) {}

  void dispatch(const httplib::Request& req, httplib::Response& res) {
    const ApiResponse out = service.handle(req.method, req.path, req.body);
    res.status = out.status;
    std::string type = "application/json";
    for (const auto& [name, value] : out.headers) {
      if (name == "Content-Type") {
        type = value;
      } else {
        res.set_header(name, value);
      }
    }
    if (!out.body.empty()) res.set_content(out.body, type);
    spdlog::info("{} {} -> {}", req.method, req.path, out.status);
  }

  const ApiService& service;
  httplib::Server server;
};

HttpServer::HttpServer(const ApiService& service) : impl_(std::make_unique<Impl>(service)) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) { impl_->dispatch(req, res); };
  const std::string any = R"(/.*)";
  impl_->server.Get(any, handler);
  impl_->server.Post(any, handler);
  impl_->server.Put(any, handler);
  impl_->server.Delete(any, handler);
  impl_->server.Options(any, handler);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                              : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw Error(ErrorCode::kIoError, kComponent, "cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

std::pair<std::string, int> parse_listen_address(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) {
    throw Error(ErrorCode::kSchemaError, kComponent, "listen address must be host:port");
  }
  int port = -1;
  const auto digits = text.substr(colon + 1);
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || port < 0 || port > 65535) {
    throw Error(ErrorCode::kSchemaError, kComponent, "invalid port in listen address");
  }
  return {std::string(text.substr(0, colon)), port};
}

}  // namespace roadtones
