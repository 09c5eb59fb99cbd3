#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace roadtones {

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;
};

enum class ResponseFormat { kText, kJson };

/// One chat-completion call.
///
/// `task` and `context` never go on the wire: `task` names the pipeline step
/// (see namespace `tasks`) and `context` holds the structured values the
/// prompt was rendered from. Deterministic stand-in providers read them.
struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  double top_p = 1.0;
  int max_tokens = 256;
  ResponseFormat response_format = ResponseFormat::kText;
  std::optional<std::uint64_t> seed;

  std::string task;
  std::map<std::string, std::string> context;
};

struct Usage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
  int total_tokens = 0;
};

struct ChatResponse {
  std::string text;
  Usage usage;
  std::string model;
};

/// Throws Error(kPreconditionFailed) for an empty message list or a negative
/// temperature.
void validate_request(const ChatRequest& request);

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  /// One vector per input, in input order. An empty batch yields an empty
  /// result without contacting the service.
  virtual std::vector<std::vector<double>> embed(std::span<const std::string> texts) = 0;
  /// Short description recorded alongside each embedding.
  virtual std::string tag() const = 0;
};

namespace tasks {
inline constexpr const char* kExtractWritingStyle = "extract.writing_style";
inline constexpr const char* kExtractPersonality = "extract.personality";
inline constexpr const char* kExtractInformativeness = "extract.informativeness";
inline constexpr const char* kExtractStructural = "extract.structural";
inline constexpr const char* kProposeStyle = "extract.propose_style";
inline constexpr const char* kJudgePersonality = "judge.personality";
inline constexpr const char* kJudgeWritingStyle = "judge.writing_style";
inline constexpr const char* kJudgeFactualConsistency = "judge.factual_consistency";
inline constexpr const char* kGenerateCaption = "generate.caption";
}  // namespace tasks

}  // namespace roadtones
