#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "roadtones/error.hpp"
#include "roadtones/runtime.hpp"

namespace roadtones {

struct ApiResponse {
  int status = 200;
  std::string body;
  std::map<std::string, std::string> headers;

  nlohmann::json json() const { return nlohmann::json::parse(body); }
};

/// HTTP status for an error code: 400 for request and schema problems, 502
/// for provider and reply-parsing failures, 404 for NotFound, 500 otherwise.
int http_status_for(ErrorCode code) noexcept;

/// `{"code", "message", "component"}`.
nlohmann::ordered_json api_error_json(const Error& error);

/// Body of a successful generation: `{final, final_stage, stage1, stage2,
/// scores, provenance}`; a stage that did not run is null.
nlohmann::ordered_json generation_response_json(const GenerationResult& result);

struct ServiceOptions {
  /// Value of Access-Control-Allow-Origin.
  std::string cors_origin = "*";
};

/// Route table of the HTTP API, independent of any transport:
///
///   POST /api/extract   {caption, summary}              -> wire-form profile
///   POST /api/generate  {summary, spec, mode?, n?}      -> final, stage drafts, scores, provenance
///   POST /api/score     {caption, summary, spec, scope?} -> ScoreReport
///   GET  /api/inventory                                  -> names, counts, bins
///   GET  /healthz                                        -> {"status": "ok"}
///
/// Stateless between requests; safe to call concurrently.
class ApiService {
 public:
  explicit ApiService(Runtime& runtime, ServiceOptions options = {});

  ApiResponse handle(std::string_view method, std::string_view path, std::string_view body) const;

 private:
  nlohmann::ordered_json extract(const nlohmann::json& body) const;
  nlohmann::ordered_json generate(const nlohmann::json& body) const;
  nlohmann::ordered_json score(const nlohmann::json& body) const;
  nlohmann::ordered_json inventory() const;
  ToneProfile checked_spec(const nlohmann::json& body) const;

  Runtime& runtime_;
  ServiceOptions options_;
};

/// Blocking HTTP front end for an ApiService.
class HttpServer {
 public:
  explicit HttpServer(const ApiService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds `host:port` (port 0 picks a free one) and returns the bound port.
  /// Throws Error(kIoError) when binding fails.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Splits "host:port"; throws Error(kSchemaError) on a malformed value.
std::pair<std::string, int> parse_listen_address(std::string_view text);

}  // namespace roadtones
