#pragma once

#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "roadtones/error.hpp"
#include "roadtones/provider.hpp"

namespace roadtones {

struct MockOptions {
  /// Canned replies, keyed by prompt_hash() or by "task:<task name>". A hash
  /// match wins over a task match.
  std::map<std::string, std::string> fixtures;
  /// Tasks that always fail with `failure_code`.
  std::set<std::string> failing_tasks;
  /// Tasks that fail this many times before answering normally.
  std::map<std::string, int> transient_failures;
  /// Requests whose message text contains any of these always fail.
  std::vector<std::string> failing_substrings;
  ErrorCode failure_code = ErrorCode::kTransportError;
  std::size_t embedding_dim = 256;
};

/// Deterministic offline provider. Replies depend only on the request (task,
/// context and seed) and the options, never on wall-clock or call order,
/// except for `transient_failures`. Safe for concurrent use.
class MockProvider final : public ChatProvider, public EmbeddingProvider {
 public:
  explicit MockProvider(MockOptions options = {});

  ChatResponse complete(const ChatRequest& request) override;
  std::vector<std::vector<double>> embed(std::span<const std::string> texts) override;
  std::string tag() const override;

  /// FNV-1a over model, messages and seed, as 16 hex digits.
  static std::string prompt_hash(const ChatRequest& request);

  std::size_t call_count() const noexcept { return calls_.load(); }
  /// Requests seen so far, in arrival order.
  std::vector<ChatRequest> requests() const;

 private:
  std::string answer(const ChatRequest& request) const;

  MockOptions options_;
  std::atomic<std::size_t> calls_{0};
  mutable std::mutex mutex_;
  std::vector<ChatRequest> log_;
  std::map<std::string, int> remaining_failures_;
};

}  // namespace roadtones
