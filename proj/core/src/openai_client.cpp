#include "roadtones/openai_client.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include "roadtones/error.hpp"

namespace roadtones {
namespace {

constexpr std::string_view kComponent = "providers";

[[noreturn]] void fail(ErrorCode code, const std::string& message, std::string detail = {}) {
  throw Error(code, std::string(kComponent), message, std::move(detail));
}

double jitter_factor(double jitter) {
  if (jitter <= 0.0) return 1.0;
  thread_local std::mt19937_64 rng{std::random_device{}()};
  std::uniform_real_distribution<double> dist(-jitter, jitter);
  return 1.0 + dist(rng);
}

std::optional<std::chrono::milliseconds> retry_after(const httplib::Result& res) {
  if (!res || !res->has_header("Retry-After")) return std::nullopt;
  const auto value = res->get_header_value("Retry-After");
  char* end = nullptr;
  const double seconds = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || seconds < 0) return std::nullopt;
  return std::chrono::milliseconds(static_cast<long long>(seconds * 1000.0));
}

}  // namespace

void ProviderConfig::validate() const {
  if (retry.max_attempts < 1) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                "provider '" + name + "': retry.max_attempts must be >= 1", "max_attempts");
  }
  if (timeout.count() <= 0) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                "provider '" + name + "': timeout must be > 0", "timeout");
  }
  if (embedding_batch_size == 0) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                "provider '" + name + "': embedding_batch_size must be > 0", "embedding_batch_size");
  }
}

OpenAiClient::OpenAiClient(ProviderConfig config, Sleeper sleeper)
    : config_(std::move(config)),
      sleeper_(sleeper ? std::move(sleeper)
                       : Sleeper([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); })),
      limiter_(std::make_shared<RateLimiter>(config_.rate_limit.requests, config_.rate_limit.interval)) {
  config_.validate();
  const auto& url = config_.base_url;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                "provider '" + config_.name + "': base_url must include a scheme", "base_url");
  }
  const auto path_begin = url.find('/', scheme_end + 3);
  endpoint_.scheme_host_port = url.substr(0, path_begin);
  endpoint_.path_prefix = path_begin == std::string::npos ? "" : url.substr(path_begin);
  while (!endpoint_.path_prefix.empty() && endpoint_.path_prefix.back() == '/') {
    endpoint_.path_prefix.pop_back();
  }
}

std::string OpenAiClient::tag() const {
  return config_.name.empty() ? config_.embedding_model : config_.name + ":" + config_.embedding_model;
}

std::string OpenAiClient::api_key() const {
  if (config_.api_key_env.empty()) return {};
  const char* value = std::getenv(config_.api_key_env.c_str());
  if (value == nullptr || *value == '\0') {
    fail(ErrorCode::kAuthError,
         "environment variable " + config_.api_key_env + " is not set for provider '" +
             config_.name + "'",
         "missing_key");
  }
  return value;
}

std::chrono::milliseconds OpenAiClient::backoff_delay(int attempt) const {
  const double base = static_cast<double>(config_.retry.initial_backoff.count()) *
                      std::pow(2.0, std::max(0, attempt - 1));
  return std::chrono::milliseconds(static_cast<long long>(
      std::min(base, static_cast<double>(config_.retry.max_backoff.count()))));
}

nlohmann::json OpenAiClient::chat_body(const ChatRequest& request) {
  nlohmann::json body;
  body["model"] = request.model;
  auto& messages = body["messages"] = nlohmann::json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  body["temperature"] = request.temperature;
  body["top_p"] = request.top_p;
  body["max_tokens"] = request.max_tokens;
  if (request.response_format == ResponseFormat::kJson) {
    body["response_format"] = {{"type", "json_object"}};
  }
  if (request.seed) body["seed"] = *request.seed;
  return body;
}

std::string OpenAiClient::post_json(const std::string& path, const nlohmann::json& body) {
  const std::string key = api_key();  // fails before any network traffic
  httplib::Headers headers;
  if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);
  const std::string payload = body.dump();
  const std::string full_path = endpoint_.path_prefix + path;
  const auto timeout_s = config_.timeout.count() / 1000;
  const auto timeout_us = (config_.timeout.count() % 1000) * 1000;

  std::optional<Error> last;
  for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
    limiter_->acquire();
    httplib::Client client(endpoint_.scheme_host_port);
    client.set_connection_timeout(timeout_s, timeout_us);
    client.set_read_timeout(timeout_s, timeout_us);
    client.set_write_timeout(timeout_s, timeout_us);

    auto res = client.Post(full_path, headers, payload, "application/json");
    std::optional<std::chrono::milliseconds> server_hint;
    if (!res) {
      const auto err = res.error();
      const bool timed_out = err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read;
      last.emplace(timed_out ? ErrorCode::kTimeout : ErrorCode::kTransportError,
                   std::string(kComponent),
                   "request to " + endpoint_.scheme_host_port + full_path +
                       " failed: " + httplib::to_string(err));
    } else if (res->status >= 200 && res->status < 300) {
      return res->body;
    } else if (res->status == 401 || res->status == 403) {
      fail(ErrorCode::kAuthError,
           "provider '" + config_.name + "' rejected credentials (HTTP " +
               std::to_string(res->status) + ")",
           std::to_string(res->status));
    } else if (res->status == 429) {
      last.emplace(ErrorCode::kRateLimited, std::string(kComponent),
                   "provider '" + config_.name + "' is rate limiting (HTTP 429)");
      last->with_http_status(429);
      server_hint = retry_after(res);
    } else if (res->status >= 500) {
      last.emplace(ErrorCode::kUpstreamError, std::string(kComponent),
                   "provider '" + config_.name + "' returned HTTP " + std::to_string(res->status),
                   std::to_string(res->status));
      last->with_http_status(res->status);
    } else {
      Error error(ErrorCode::kUpstreamError, std::string(kComponent),
                  "provider '" + config_.name + "' returned HTTP " + std::to_string(res->status) +
                      ": " + res->body.substr(0, 200),
                  std::to_string(res->status));
      error.with_http_status(res->status);
      throw error;
    }

    if (attempt < config_.retry.max_attempts) {
      auto delay = std::chrono::milliseconds(static_cast<long long>(
          static_cast<double>(backoff_delay(attempt).count()) * jitter_factor(config_.retry.jitter)));
      if (server_hint) delay = std::max(delay, *server_hint);
      sleeper_(delay);
    }
  }
  throw *last;
}

ChatResponse OpenAiClient::complete(const ChatRequest& request) {
  validate_request(request);
  const auto raw = post_json("/chat/completions", chat_body(request));
  try {
    const auto doc = nlohmann::json::parse(raw);
    ChatResponse response;
    response.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
    response.model = doc.value("model", request.model);
    if (doc.contains("usage") && doc["usage"].is_object()) {
      const auto& u = doc["usage"];
      response.usage.prompt_tokens = u.value("prompt_tokens", 0);
      response.usage.completion_tokens = u.value("completion_tokens", 0);
      response.usage.total_tokens = u.value("total_tokens", 0);
    }
    return response;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kUpstreamError,
         "provider '" + config_.name + "' returned a malformed completion: " + e.what(),
         "malformed");
  }
}

std::vector<std::vector<double>> OpenAiClient::embed(std::span<const std::string> texts) {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (std::size_t start = 0; start < texts.size(); start += config_.embedding_batch_size) {
    const auto count = std::min(config_.embedding_batch_size, texts.size() - start);
    nlohmann::json body;
    body["model"] = config_.embedding_model;
    body["input"] = std::vector<std::string>(texts.begin() + static_cast<std::ptrdiff_t>(start),
                                             texts.begin() + static_cast<std::ptrdiff_t>(start + count));
    const auto raw = post_json("/embeddings", body);
    try {
      const auto doc = nlohmann::json::parse(raw);
      const auto& data = doc.at("data");
      if (data.size() != count) {
        fail(ErrorCode::kUpstreamError, "embedding response has " + std::to_string(data.size()) +
                                            " vectors for " + std::to_string(count) + " inputs",
             "malformed");
      }
      std::vector<std::vector<double>> chunk(count);
      for (std::size_t i = 0; i < data.size(); ++i) {
        const auto index = data[i].value("index", i);
        if (index >= count) fail(ErrorCode::kUpstreamError, "embedding index out of range", "malformed");
        chunk[index] = data[i].at("embedding").get<std::vector<double>>();
      }
      for (auto& v : chunk) out.push_back(std::move(v));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kUpstreamError,
           "provider '" + config_.name + "' returned malformed embeddings: " + e.what(), "malformed");
    }
  }
  return out;
}

}  // namespace roadtones
