#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadtones/judge.hpp"
#include "roadtones/metrics.hpp"
#include "roadtones/provider.hpp"
#include "roadtones/templates.hpp"
#include "roadtones/tone_schema.hpp"

namespace roadtones {

enum class GenerationMode { kTwoStage, kOrderReversed, kSingleStage, kStyleOnly, kPersonalityOnly };

std::string_view to_string(GenerationMode mode) noexcept;
/// Accepts "two_stage", "order_reversed", "single_stage", "style_only",
/// "personality_only"; throws Error(kSchemaError) otherwise.
GenerationMode generation_mode_from_string(std::string_view text);

enum class ControlFamily { kPersonality, kWritingStyle, kStructural };

std::string_view to_string(ControlFamily family) noexcept;
ControlFamily control_family_from_string(std::string_view text);

struct StagePlan {
  int stage = 1;
  std::vector<ControlFamily> controls;  // families this stage is asked to apply
  NarrativeScope scope = NarrativeScope::kFull;
};

/// Stages a mode runs, in order.
///   two_stage:        {W, S} scored on W, then {P} scored in full
///   order_reversed:   {P, S} scored on P, then {W} scored in full
///   single_stage:     {P, W, S} scored in full
///   style_only:       {W, S} scored on W
///   personality_only: {P, S} scored on P
std::vector<StagePlan> stage_plan(GenerationMode mode);

struct GenerationConfig {
  std::string model = "gpt-4.1";
  double temperature = 0.7;
  double top_p = 1.0;
  int max_tokens = 2048;
  int n = 2;
  GenerationMode mode = GenerationMode::kTwoStage;
  /// Candidates with FC below this are passed over when others clear it.
  double fc_floor = 0.3;
  /// Generate and score a stage's candidates concurrently.
  bool parallel = true;

  /// Throws Error(kSchemaError) for n < 1, a negative temperature or an
  /// fc_floor outside [0,1]. With `sampling_required`, temperature must be
  /// strictly positive.
  void validate(bool sampling_required = false) const;
};

struct CaptionCandidate {
  std::string text;
  int stage = 1;
  int run_index = 0;
  ToneProfile extracted;
  ScoreReport report;
};

struct FailedCandidate {
  int run_index = 0;
  std::string code;
  std::string message;
};

struct StageResult {
  int stage = 1;
  std::vector<ControlFamily> controls;
  NarrativeScope scope = NarrativeScope::kFull;
  std::vector<CaptionCandidate> candidates;  // successful slots, run order
  std::vector<FailedCandidate> failures;
  std::size_t best_index = 0;

  const CaptionCandidate& best() const { return candidates.at(best_index); }
};

struct GenerationResult {
  GenerationMode mode = GenerationMode::kTwoStage;
  CaptionCandidate final_candidate;
  std::vector<StageResult> stages;
};

struct RenderedPrompt {
  std::string system;
  std::string user;
};

/// Wire-form subset of `target` holding only `families`.
nlohmann::ordered_json partial_wire(const ToneProfile& target, std::span<const ControlFamily> families);

/// Fills the stage template. Stage 1 gets the serialized `controls`; stage 2
/// also gets the prior caption and the `constraints` already met. Throws
/// Error(kPreconditionFailed) for stage 2 without a prior caption and
/// Error(kTemplateError) for a template placeholder left unfilled.
RenderedPrompt render_stage_prompt(const PromptLibrary& prompts, int stage, std::string_view summary,
                                   const ToneProfile& target, std::span<const ControlFamily> controls,
                                   const std::optional<std::string>& prior_best = std::nullopt,
                                   std::span<const ControlFamily> constraints = {});

/// Index of the best candidate: highest overall among those at or above the
/// FC floor (all of them if none are), ties to the lowest run index.
std::size_t select_best(std::span<const CaptionCandidate> candidates, double fc_floor);

/// The two-stage tone-controlled caption generator.
class ToneCaptionGenerator {
 public:
  ToneCaptionGenerator(const PromptLibrary& prompts, ChatProvider& provider,
                       const CaptionEvaluator& evaluator, GenerationConfig config = {});

  /// First stage of the configured mode.
  StageResult stage1_generate(std::string_view summary, const ToneProfile& target) const;
  /// Second stage of the configured mode; throws Error(kPreconditionFailed)
  /// for single-stage modes.
  StageResult stage2_refine(std::string_view summary, const ToneProfile& target,
                            const StageResult& stage1) const;

  /// Runs every stage of the mode and returns the best candidate across
  /// stages; a tie goes to the later stage.
  GenerationResult generate(std::string_view summary, const ToneProfile& target) const;

  const GenerationConfig& config() const noexcept { return config_; }

 private:
  StageResult run_stage(const StagePlan& plan, std::string_view summary, const ToneProfile& target,
                        const std::optional<std::string>& prior,
                        std::span<const ControlFamily> constraints) const;
  CaptionCandidate run_slot(const StagePlan& plan, int run_index, const RenderedPrompt& prompt,
                            std::string_view summary, const ToneProfile& target,
                            const std::map<std::string, std::string>& context) const;
  void check_target(const ToneProfile& target) const;

  const PromptLibrary& prompts_;
  ChatProvider& provider_;
  const CaptionEvaluator& evaluator_;
  GenerationConfig config_;
};

nlohmann::ordered_json to_json(const CaptionCandidate& candidate);
nlohmann::ordered_json to_json(const StageResult& stage);
nlohmann::ordered_json to_json(const GenerationResult& result);
CaptionCandidate caption_candidate_from_json(const nlohmann::json& doc);
StageResult stage_result_from_json(const nlohmann::json& doc);

}  // namespace roadtones
