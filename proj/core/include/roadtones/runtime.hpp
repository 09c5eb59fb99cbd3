#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "roadtones/config.hpp"
#include "roadtones/dataset.hpp"
#include "roadtones/judge.hpp"
#include "roadtones/mock_provider.hpp"
#include "roadtones/sft.hpp"
#include "roadtones/tcgen.hpp"
#include "roadtones/templates.hpp"

namespace roadtones {

struct RuntimeOptions {
  AppConfig config = AppConfig::defaults();
  /// Replace every provider with one deterministic MockProvider.
  bool mock = false;
  MockOptions mock_options;
  std::optional<std::filesystem::path> data_dir;
  std::optional<std::filesystem::path> inventory;
};

/// Data directory lookup: explicit path, then $ROADTONES_DATA_DIR, then the
/// source tree's data/ when present, then the installed share directory.
std::filesystem::path resolve_data_dir(const std::optional<std::filesystem::path>& explicit_dir);

/// Owns the providers and the extractor, judge, evaluator and generator
/// built on them. Not copyable or movable: the components hold references
/// into it.
class Runtime {
 public:
  explicit Runtime(RuntimeOptions options);
  Runtime(const Runtime&) = delete;
  Runtime& operator=(const Runtime&) = delete;

  const AppConfig& config() const noexcept { return options_.config; }
  bool is_mock() const noexcept { return mock_ != nullptr; }
  /// Null unless running with the mock.
  MockProvider* mock() noexcept { return mock_.get(); }

  const std::filesystem::path& data_dir() const noexcept { return data_dir_; }
  const std::filesystem::path& inventory_path() const noexcept { return inventory_path_; }
  std::filesystem::path proposal_queue_path() const;

  const AttributeInventory& inventory() const noexcept { return *inventory_; }
  const PromptLibrary& prompts() const noexcept { return *prompts_; }
  /// Loaded on first use from `<data_dir>/instructions`.
  const InstructionSet& instructions();

  ChatProvider& chat(const std::string& provider_name);
  EmbeddingProvider& embedder();
  const ToneExtractor& extractor() const noexcept { return *extractor_; }
  const Judge& judge() const noexcept { return *judge_; }
  const CaptionEvaluator& evaluator() const noexcept { return *evaluator_; }
  /// Generator for `mode` (the configured one when unset) and candidate
  /// count `n` (configured when unset).
  ToneCaptionGenerator generator(std::optional<GenerationMode> mode = std::nullopt,
                                 std::optional<int> n = std::nullopt);

 private:
  RuntimeOptions options_;
  std::filesystem::path data_dir_;
  std::filesystem::path inventory_path_;
  std::unique_ptr<AttributeInventory> inventory_;
  std::unique_ptr<PromptLibrary> prompts_;
  std::optional<InstructionSet> instructions_;
  std::unique_ptr<MockProvider> mock_;
  std::map<std::string, std::unique_ptr<OpenAiClient>> clients_;
  std::unique_ptr<ToneExtractor> extractor_;
  std::unique_ptr<Judge> judge_;
  std::unique_ptr<CaptionEvaluator> evaluator_;
};

}  // namespace roadtones
