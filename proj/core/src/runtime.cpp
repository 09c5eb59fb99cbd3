#include "roadtones/runtime.hpp"

#include <cstdlib>

#include "roadtones/error.hpp"

namespace roadtones {

std::filesystem::path resolve_data_dir(const std::optional<std::filesystem::path>& explicit_dir) {
  if (explicit_dir) return *explicit_dir;
  if (const char* env = std::getenv("ROADTONES_DATA_DIR"); env != nullptr && *env != '\0') return env;
  const std::filesystem::path source(ROADTONES_SOURCE_DATA_DIR);
  std::error_code ec;
  if (std::filesystem::exists(source / "inventory.json", ec)) return source;
  return ROADTONES_DEFAULT_DATA_DIR;
}

Runtime::Runtime(RuntimeOptions options) : options_(std::move(options)) {
  options_.config.validate();
  data_dir_ = resolve_data_dir(options_.data_dir ? options_.data_dir : options_.config.data_dir);
  inventory_path_ = options_.inventory   ? *options_.inventory
                    : options_.config.inventory ? *options_.config.inventory
                                                : data_dir_ / "inventory.json";
  inventory_ = std::make_unique<AttributeInventory>(load_inventory(inventory_path_));
  prompts_ = std::make_unique<PromptLibrary>(PromptLibrary::load(data_dir_ / "prompts"));

  if (options_.mock) {
    mock_ = std::make_unique<MockProvider>(options_.mock_options);
  } else {
    for (const auto& [name, provider] : options_.config.providers) {
      clients_.emplace(name, std::make_unique<OpenAiClient>(provider));
    }
  }
  const auto& cfg = options_.config;
  extractor_ = std::make_unique<ToneExtractor>(*inventory_, *prompts_, chat(cfg.extraction_provider), cfg.extraction);
  judge_ = std::make_unique<Judge>(*prompts_, chat(cfg.judge_provider), cfg.judge);
  evaluator_ = std::make_unique<CaptionEvaluator>(*extractor_, *judge_);
}

std::filesystem::path Runtime::proposal_queue_path() const {
  if (options_.config.proposal_queue) return *options_.config.proposal_queue;
  return inventory_path_.parent_path() / "style_proposals.jsonl";
}

const InstructionSet& Runtime::instructions() {
  if (!instructions_) instructions_ = InstructionSet::load(data_dir_ / "instructions");
  return *instructions_;
}

ChatProvider& Runtime::chat(const std::string& provider_name) {
  if (mock_) return *mock_;
  const auto it = clients_.find(provider_name);
  if (it == clients_.end()) {
    throw Error(ErrorCode::kSchemaError, "config", "undeclared provider '" + provider_name + "'");
  }
  return *it->second;
}

EmbeddingProvider& Runtime::embedder() {
  if (mock_) return *mock_;
  const auto& name = options_.config.embedding_provider;
  const auto it = clients_.find(name);
  if (it == clients_.end()) {
    throw Error(ErrorCode::kSchemaError, "config", "undeclared provider '" + name + "'");
  }
  return *it->second;
}

ToneCaptionGenerator Runtime::generator(std::optional<GenerationMode> mode, std::optional<int> n) {
  GenerationConfig cfg = options_.config.generation;
  if (mode) cfg.mode = *mode;
  if (n) cfg.n = *n;
  return ToneCaptionGenerator(*prompts_, chat(options_.config.generation_provider), *evaluator_, cfg);
}

}  // namespace roadtones
