#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "roadtones/dataset.hpp"
#include "roadtones/extraction.hpp"
#include "roadtones/judge.hpp"
#include "roadtones/openai_client.hpp"
#include "roadtones/tcgen.hpp"

namespace roadtones {

/// Whole-application configuration. Providers are declared once by name and
/// each model-using section refers to one of them.
///
/// {
///   "providers": {"openai": {"base_url": ..., "api_key_env": ..., "timeout_ms": ...,
///                             "retry": {"max_attempts", "initial_backoff_ms",
///                                       "max_backoff_ms", "jitter"},
///                             "rate_limit": {"requests", "interval_ms"},
///                             "embedding_model", "embedding_batch_size"}},
///   "extraction": {"provider", "model", "temperature", "top_p", "max_tokens",
///                  "proposal_threshold"},
///   "judge":      {"provider", "model", "temperature", "top_p", "max_tokens"},
///   "generation": {"provider", "model", "temperature", "top_p", "max_tokens", "n",
///                  "mode", "fc_floor", "parallel"},
///   "embedding":  {"provider"},
///   "dataset":    {"k", "m", "parallel", "structural_weight", "judge_distance"},
///   "data_dir", "inventory", "proposal_queue"
/// }
///
/// Every key is optional; absent sections take the defaults below.
struct AppConfig {
  std::map<std::string, ProviderConfig> providers;
  std::string extraction_provider = "openai";
  std::string judge_provider = "openai";
  std::string generation_provider = "openai";
  std::string embedding_provider = "openai";
  ExtractionConfig extraction;
  JudgeConfig judge;
  GenerationConfig generation;
  BuildOptions dataset;
  std::optional<std::filesystem::path> data_dir;
  std::optional<std::filesystem::path> inventory;
  std::optional<std::filesystem::path> proposal_queue;

  /// Defaults: one provider "openai" with the stock ProviderConfig.
  static AppConfig defaults();

  /// Throws Error(kSchemaError) for unknown keys, wrong types, invalid
  /// section values or a reference to an undeclared provider.
  static AppConfig from_json(const nlohmann::json& doc);
  static AppConfig load(const std::filesystem::path& path);

  void validate() const;
  const ProviderConfig& provider(const std::string& name) const;
};

nlohmann::ordered_json to_json(const AppConfig& config);

}  // namespace roadtones
