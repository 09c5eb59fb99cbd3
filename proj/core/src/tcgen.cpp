#include "roadtones/tcgen.hpp"

#include <algorithm>
#include <future>

#include "roadtones/error.hpp"
#include "roadtones/text_util.hpp"

namespace roadtones {
namespace {

constexpr std::string_view kComponent = "tcgen";

bool has_family(std::span<const ControlFamily> families, ControlFamily f) {
  return std::find(families.begin(), families.end(), f) != families.end();
}

using F = ControlFamily;

}  // namespace

std::string_view to_string(GenerationMode mode) noexcept {
  switch (mode) {
    case GenerationMode::kTwoStage: return "two_stage";
    case GenerationMode::kOrderReversed: return "order_reversed";
    case GenerationMode::kSingleStage: return "single_stage";
    case GenerationMode::kStyleOnly: return "style_only";
    case GenerationMode::kPersonalityOnly: return "personality_only";
  }
  return "two_stage";
}

GenerationMode generation_mode_from_string(std::string_view text) {
  for (auto mode : {GenerationMode::kTwoStage, GenerationMode::kOrderReversed, GenerationMode::kSingleStage,
                    GenerationMode::kStyleOnly, GenerationMode::kPersonalityOnly}) {
    if (text == to_string(mode)) return mode;
  }
  throw Error(ErrorCode::kSchemaError, std::string(kComponent),
              "unknown generation mode \"" + std::string(text) + "\"", "mode");
}

std::string_view to_string(ControlFamily family) noexcept {
  switch (family) {
    case F::kPersonality: return "personality";
    case F::kWritingStyle: return "writing_style";
    case F::kStructural: return "structural";
  }
  return "structural";
}

ControlFamily control_family_from_string(std::string_view text) {
  for (auto f : {F::kPersonality, F::kWritingStyle, F::kStructural}) {
    if (text == to_string(f)) return f;
  }
  throw Error(ErrorCode::kSchemaError, std::string(kComponent),
              "unknown control family \"" + std::string(text) + "\"", "controls");
}

std::vector<StagePlan> stage_plan(GenerationMode mode) {
  switch (mode) {
    case GenerationMode::kTwoStage:
      return {{1, {F::kWritingStyle, F::kStructural}, NarrativeScope::kWritingStyleOnly},
              {2, {F::kPersonality}, NarrativeScope::kFull}};
    case GenerationMode::kOrderReversed:
      return {{1, {F::kPersonality, F::kStructural}, NarrativeScope::kPersonalityOnly},
              {2, {F::kWritingStyle}, NarrativeScope::kFull}};
    case GenerationMode::kSingleStage:
      return {{1, {F::kPersonality, F::kWritingStyle, F::kStructural}, NarrativeScope::kFull}};
    case GenerationMode::kStyleOnly:
      return {{1, {F::kWritingStyle, F::kStructural}, NarrativeScope::kWritingStyleOnly}};
    case GenerationMode::kPersonalityOnly:
      return {{1, {F::kPersonality, F::kStructural}, NarrativeScope::kPersonalityOnly}};
  }
  return {};
}

void GenerationConfig::validate(bool sampling_required) const {
  auto bad = [](const std::string& message, const char* field) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent), message, field);
  };
  if (n < 1) bad("n must be >= 1", "n");
  if (!(temperature >= 0.0)) bad("temperature must be >= 0", "temperature");
  if (sampling_required && !(temperature > 0.0)) bad("temperature must be > 0 for sampling", "temperature");
  if (!(fc_floor >= 0.0 && fc_floor <= 1.0)) bad("fc_floor must be in [0,1]", "fc_floor");
  if (max_tokens < 1) bad("max_tokens must be >= 1", "max_tokens");
}

nlohmann::ordered_json partial_wire(const ToneProfile& target, std::span<const ControlFamily> families) {
  const auto full = to_wire(target);
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  if (has_family(families, F::kPersonality)) out["Personality"] = full.at("Personality");
  if (has_family(families, F::kWritingStyle)) out["Writing Style"] = full.at("Writing Style");
  if (has_family(families, F::kStructural)) {
    out["Informativeness"] = full.at("Informativeness");
    out["Structural Attributes"] = full.at("Structural Attributes");
    out["word_count"] = full.at("word_count");
  }
  return out;
}

RenderedPrompt render_stage_prompt(const PromptLibrary& prompts, int stage, std::string_view summary,
                                   const ToneProfile& target, std::span<const ControlFamily> controls,
                                   const std::optional<std::string>& prior_best,
                                   std::span<const ControlFamily> constraints) {
  if (stage != 1 && stage != 2) {
    throw Error(ErrorCode::kPreconditionFailed, std::string(kComponent), "stage must be 1 or 2");
  }
  if (stage == 2 && !prior_best) {
    throw Error(ErrorCode::kPreconditionFailed, std::string(kComponent),
                "stage 2 needs the stage-1 best caption");
  }
  TemplateVars vars{{"summary", std::string(summary)},
                    {"spec", serialize_json_inline(partial_wire(target, controls))},
                    {"word_count", std::to_string(target.structural.word_count)}};
  if (stage == 2) {
    vars["prior_caption"] = *prior_best;
    vars["constraints"] = serialize_json_inline(partial_wire(target, constraints));
  }
  const auto& tpl = prompts.get(stage == 1 ? "tcgen_stage1" : "tcgen_stage2");
  return {tpl.render_system(vars), tpl.render_user(vars)};
}

std::size_t select_best(std::span<const CaptionCandidate> candidates, double fc_floor) {
  if (candidates.empty()) {
    throw Error(ErrorCode::kAllCandidatesFailed, std::string(kComponent), "no candidates to select from");
  }
  const bool any_pass = std::any_of(candidates.begin(), candidates.end(),
                                    [&](const CaptionCandidate& c) { return c.report.fc >= fc_floor; });
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (any_pass && candidates[i].report.fc < fc_floor) continue;
    if (!best || candidates[i].report.overall > candidates[*best].report.overall) best = i;
  }
  return *best;
}

ToneCaptionGenerator::ToneCaptionGenerator(const PromptLibrary& prompts, ChatProvider& provider,
                                           const CaptionEvaluator& evaluator, GenerationConfig config)
    : prompts_(prompts), provider_(provider), evaluator_(evaluator), config_(std::move(config)) {
  config_.validate();
}

void ToneCaptionGenerator::check_target(const ToneProfile& target) const {
  if (target.role != ProfileRole::kTarget) {
    throw Error(ErrorCode::kPreconditionFailed, std::string(kComponent), "generation needs a target profile");
  }
  validate_profile(target, evaluator_.extractor().inventory());
}

CaptionCandidate ToneCaptionGenerator::run_slot(const StagePlan& plan, int run_index,
                                                const RenderedPrompt& prompt, std::string_view summary,
                                                const ToneProfile& target,
                                                const std::map<std::string, std::string>& context) const {
  ChatRequest request;
  request.model = config_.model;
  if (!prompt.system.empty()) request.messages.push_back({"system", prompt.system});
  request.messages.push_back({"user", prompt.user});
  request.temperature = config_.temperature;
  request.top_p = config_.top_p;
  request.max_tokens = config_.max_tokens;
  request.seed = static_cast<std::uint64_t>(run_index);
  request.task = tasks::kGenerateCaption;
  request.context = context;

  for (int attempt = 1;; ++attempt) {
    try {
      CaptionCandidate c;
      c.text = std::string(trim(provider_.complete(request).text));
      c.stage = plan.stage;
      c.run_index = run_index;
      auto scored = evaluator_.score_caption(c.text, summary, target, plan.scope);
      c.extracted = std::move(scored.extracted);
      c.report = scored.report;
      return c;
    } catch (const Error& e) {
      if (attempt >= 2 || !is_transient(e.code())) throw;
    }
  }
}

StageResult ToneCaptionGenerator::run_stage(const StagePlan& plan, std::string_view summary,
                                            const ToneProfile& target, const std::optional<std::string>& prior,
                                            std::span<const ControlFamily> constraints) const {
  const auto prompt = render_stage_prompt(prompts_, plan.stage, summary, target, plan.controls, prior, constraints);
  std::map<std::string, std::string> context{
      {"summary", std::string(summary)},
      {"spec", partial_wire(target, plan.controls).dump()},
      {"word_count", std::to_string(target.structural.word_count)}};
  if (prior) {
    context["prior_caption"] = *prior;
    context["constraints"] = partial_wire(target, constraints).dump();
  }

  const auto n = static_cast<std::size_t>(config_.n);
  std::vector<std::optional<CaptionCandidate>> slots(n);
  std::vector<std::optional<FailedCandidate>> failed(n);
  auto run = [&](std::size_t i) {
    try {
      slots[i] = run_slot(plan, static_cast<int>(i), prompt, summary, target, context);
    } catch (const Error& e) {
      failed[i] = FailedCandidate{static_cast<int>(i), std::string(to_string(e.code())), e.what()};
    }
  };
  if (config_.parallel && n > 1) {
    std::vector<std::future<void>> jobs;
    for (std::size_t i = 0; i < n; ++i) jobs.push_back(std::async(std::launch::async, run, i));
    for (auto& j : jobs) j.get();
  } else {
    for (std::size_t i = 0; i < n; ++i) run(i);
  }

  StageResult result;
  result.stage = plan.stage;
  result.controls = plan.controls;
  result.scope = plan.scope;
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i]) result.candidates.push_back(std::move(*slots[i]));
    if (failed[i]) result.failures.push_back(std::move(*failed[i]));
  }
  if (result.candidates.empty()) {
    std::string reasons;
    for (const auto& f : result.failures) reasons += "; run " + std::to_string(f.run_index) + ": " + f.message;
    throw Error(ErrorCode::kAllCandidatesFailed, std::string(kComponent),
                "stage " + std::to_string(plan.stage) + ": all " + std::to_string(n) + " candidates failed" +
                    reasons);
  }
  result.best_index = select_best(result.candidates, config_.fc_floor);
  return result;
}

StageResult ToneCaptionGenerator::stage1_generate(std::string_view summary, const ToneProfile& target) const {
  check_target(target);
  return run_stage(stage_plan(config_.mode).front(), summary, target, std::nullopt, {});
}

StageResult ToneCaptionGenerator::stage2_refine(std::string_view summary, const ToneProfile& target,
                                                const StageResult& stage1) const {
  check_target(target);
  const auto plans = stage_plan(config_.mode);
  if (plans.size() < 2) {
    throw Error(ErrorCode::kPreconditionFailed, std::string(kComponent),
                std::string("mode ") + std::string(to_string(config_.mode)) + " has no second stage");
  }
  if (stage1.candidates.empty()) {
    throw Error(ErrorCode::kPreconditionFailed, std::string(kComponent), "stage 1 has no best candidate");
  }
  return run_stage(plans[1], summary, target, stage1.best().text, plans[0].controls);
}

GenerationResult ToneCaptionGenerator::generate(std::string_view summary, const ToneProfile& target) const {
  GenerationResult result;
  result.mode = config_.mode;
  result.stages.push_back(stage1_generate(summary, target));
  if (stage_plan(config_.mode).size() > 1) {
    result.stages.push_back(stage2_refine(summary, target, result.stages.front()));
  }
  const CaptionCandidate* best = nullptr;
  for (const auto& stage : result.stages) {
    const auto& candidate = stage.best();
    if (best == nullptr || candidate.report.overall >= best->report.overall) best = &candidate;
  }
  result.final_candidate = *best;
  return result;
}

nlohmann::ordered_json to_json(const CaptionCandidate& c) {
  nlohmann::ordered_json doc;
  doc["text"] = c.text;
  doc["stage"] = c.stage;
  doc["run_index"] = c.run_index;
  doc["extracted"] = to_wire(c.extracted);
  doc["report"] = to_json(c.report);
  return doc;
}

nlohmann::ordered_json to_json(const StageResult& s) {
  nlohmann::ordered_json doc;
  doc["stage"] = s.stage;
  auto& controls = doc["controls"] = nlohmann::ordered_json::array();
  for (auto f : s.controls) controls.push_back(to_string(f));
  doc["scope"] = to_string(s.scope);
  doc["best_index"] = s.best_index;
  auto& candidates = doc["candidates"] = nlohmann::ordered_json::array();
  for (const auto& c : s.candidates) candidates.push_back(to_json(c));
  auto& failures = doc["failures"] = nlohmann::ordered_json::array();
  for (const auto& f : s.failures) {
    failures.push_back({{"run_index", f.run_index}, {"code", f.code}, {"message", f.message}});
  }
  return doc;
}

nlohmann::ordered_json to_json(const GenerationResult& r) {
  nlohmann::ordered_json doc;
  doc["mode"] = to_string(r.mode);
  doc["final"] = to_json(r.final_candidate);
  auto& stages = doc["stages"] = nlohmann::ordered_json::array();
  for (const auto& s : r.stages) stages.push_back(to_json(s));
  return doc;
}

CaptionCandidate caption_candidate_from_json(const nlohmann::json& doc) {
  try {
    CaptionCandidate c;
    c.text = doc.at("text").get<std::string>();
    c.stage = doc.at("stage").get<int>();
    c.run_index = doc.value("run_index", 0);
    c.extracted = profile_from_wire(doc.at("extracted"), ProfileRole::kExtracted);
    c.report = score_report_from_json(doc.at("report"));
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                std::string("malformed caption candidate: ") + e.what());
  }
}

StageResult stage_result_from_json(const nlohmann::json& doc) {
  try {
    StageResult s;
    s.stage = doc.at("stage").get<int>();
    for (const auto& f : doc.at("controls")) s.controls.push_back(control_family_from_string(f.get<std::string>()));
    s.scope = narrative_scope_from_string(doc.at("scope").get<std::string>());
    for (const auto& c : doc.at("candidates")) s.candidates.push_back(caption_candidate_from_json(c));
    if (doc.contains("failures")) {
      for (const auto& f : doc.at("failures")) {
        s.failures.push_back({f.at("run_index").get<int>(), f.at("code").get<std::string>(),
                              f.at("message").get<std::string>()});
      }
    }
    s.best_index = doc.at("best_index").get<std::size_t>();
    if (!s.candidates.empty() && s.best_index >= s.candidates.size()) {
      throw Error(ErrorCode::kSchemaError, std::string(kComponent), "best_index out of range", "best_index");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent), std::string("malformed stage result: ") + e.what());
  }
}

}  // namespace roadtones
