#include "roadtones/judge.hpp"

#include "roadtones/error.hpp"
#include "roadtones/structured_call.hpp"
#include "roadtones/text_util.hpp"

namespace roadtones {
namespace {

constexpr std::string_view kComponent = "metrics";

}  // namespace

void JudgeConfig::validate() const {
  if (temperature != 0.0) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                "judge temperature must be 0, got " + format_double(temperature), "temperature");
  }
  if (max_tokens < 1) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent), "judge max_tokens must be >= 1",
                "max_tokens");
  }
}

Judge::Judge(const PromptLibrary& prompts, ChatProvider& provider, JudgeConfig config)
    : prompts_(prompts), provider_(provider), config_(std::move(config)) {
  config_.validate();
}

double Judge::score(std::string_view prompt, std::string_view task, const TemplateVars& vars,
                    std::map<std::string, std::string> context) const {
  const auto& tpl = prompts_.get(prompt);
  ChatRequest request;
  request.model = config_.model;
  if (const auto system = tpl.render_system(vars); !system.empty()) {
    request.messages.push_back({"system", system});
  }
  request.messages.push_back({"user", tpl.render_user(vars)});
  request.temperature = config_.temperature;
  request.top_p = config_.top_p;
  request.max_tokens = config_.max_tokens;
  request.task = std::string(task);
  request.context = std::move(context);

  double value = 0.0;
  call_structured(
      provider_, std::move(request),
      [&](const nlohmann::json& doc) {
        if (!doc.contains("score")) {
          throw Error(ErrorCode::kParseError, std::string(kComponent), "reply lacks \"score\"", "schema");
        }
        value = require_unit_interval(doc.at("score"), "score", kComponent);
      },
      kComponent);
  return value;
}

double Judge::judge_maps(std::string_view prompt, std::string_view task, const IntensityMap& target,
                         const IntensityMap& extracted) const {
  const auto target_text = serialize_json_inline(intensity_map_json(target));
  const auto extracted_text = serialize_json_inline(intensity_map_json(extracted));
  const TemplateVars vars{{"target", target_text}, {"extracted", extracted_text}};
  return score(prompt, task, vars, {{"target", target_text}, {"extracted", extracted_text}});
}

double Judge::judge_personality(const IntensityMap& target, const IntensityMap& extracted) const {
  return judge_maps("judge_personality", tasks::kJudgePersonality, target, extracted);
}

double Judge::judge_style(const IntensityMap& target, const IntensityMap& extracted) const {
  return judge_maps("judge_writing_style", tasks::kJudgeWritingStyle, target, extracted);
}

double Judge::factual_consistency(std::string_view caption, std::string_view summary) const {
  if (trim(summary).empty()) {
    throw Error(ErrorCode::kPreconditionFailed, std::string(kComponent), "summary must not be empty");
  }
  const TemplateVars vars{{"caption", std::string(caption)}, {"summary", std::string(summary)}};
  return score("judge_factual_consistency", tasks::kJudgeFactualConsistency, vars,
               {{"caption", std::string(caption)}, {"summary", std::string(summary)}});
}

CaptionEvaluator::CaptionEvaluator(const ToneExtractor& extractor, const Judge& judge)
    : extractor_(extractor), judge_(judge) {}

CaptionScore CaptionEvaluator::score_caption(std::string_view caption, std::string_view summary,
                                             const ToneProfile& target, NarrativeScope scope) const {
  if (target.role != ProfileRole::kTarget) {
    throw Error(ErrorCode::kPreconditionFailed, std::string(kComponent),
                "score_caption needs a target profile");
  }
  validate_profile(target, extractor_.inventory());

  CaptionScore out;
  out.extracted = extractor_.extract_tone_profile(caption, summary);
  std::optional<double> s_p;
  std::optional<double> s_w;
  if (scope != NarrativeScope::kWritingStyleOnly) {
    s_p = judge_.judge_personality(target.personality, out.extracted.personality);
  }
  if (scope != NarrativeScope::kPersonalityOnly) {
    s_w = judge_.judge_style(target.writing_style, out.extracted.writing_style);
  }
  const double fc = judge_.factual_consistency(caption, summary);
  out.report = assemble_report(s_p, s_w, structural_alignment(target.structural, out.extracted.structural), fc);
  return out;
}

}  // namespace roadtones
