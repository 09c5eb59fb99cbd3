#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "roadtones/provider.hpp"
#include "roadtones/rate_limiter.hpp"

namespace roadtones {

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds max_backoff{8000};
  double jitter = 0.25;  // +/- fraction applied to each delay
};

struct RateLimitConfig {
  int requests = 0;  // 0 = unlimited
  std::chrono::milliseconds interval{60000};
};

struct ProviderConfig {
  std::string name;
  std::string base_url = "https://api.openai.com/v1";
  /// Environment variable holding the API key. Empty means the endpoint
  /// takes no key (local gateways, test stubs).
  std::string api_key_env = "OPENAI_API_KEY";
  std::chrono::milliseconds timeout{60000};
  RetryPolicy retry;
  RateLimitConfig rate_limit;
  std::size_t embedding_batch_size = 64;
  std::string embedding_model = "text-embedding-3-small";

  /// Throws Error(kSchemaError) if max_attempts < 1 or timeout <= 0.
  void validate() const;
};

/// Backoff hook; tests substitute a recorder for the real sleep.
using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// OpenAI-compatible client for `/chat/completions` and `/embeddings`.
///
/// Transport failures, timeouts, 429 and 5xx responses are retried with
/// exponential backoff and jitter (honouring `Retry-After` on 429). Other
/// 4xx responses fail immediately: 401/403 as AuthError, the rest as
/// UpstreamError carrying the status. Safe for concurrent use; each call
/// opens its own connection and the rate limiter is shared.
class OpenAiClient final : public ChatProvider, public EmbeddingProvider {
 public:
  explicit OpenAiClient(ProviderConfig config, Sleeper sleeper = {});

  ChatResponse complete(const ChatRequest& request) override;
  std::vector<std::vector<double>> embed(std::span<const std::string> texts) override;
  std::string tag() const override;

  const ProviderConfig& config() const noexcept { return config_; }

  /// JSON body sent for a chat request (task and context are not included).
  static nlohmann::json chat_body(const ChatRequest& request);

  /// Delay before retry number `attempt` (1-based), before jitter.
  std::chrono::milliseconds backoff_delay(int attempt) const;

 private:
  struct Endpoint {
    std::string scheme_host_port;
    std::string path_prefix;
  };

  std::string post_json(const std::string& path, const nlohmann::json& body);
  std::string api_key() const;

  ProviderConfig config_;
  Endpoint endpoint_;
  Sleeper sleeper_;
  std::shared_ptr<RateLimiter> limiter_;
};

}  // namespace roadtones
