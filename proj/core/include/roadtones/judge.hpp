#pragma once

#include <string>
#include <string_view>

#include "roadtones/extraction.hpp"
#include "roadtones/metrics.hpp"
#include "roadtones/provider.hpp"
#include "roadtones/templates.hpp"

namespace roadtones {

struct JudgeConfig {
  std::string model = "gpt-4.1";
  double temperature = 0.0;
  double top_p = 1.0;
  int max_tokens = 256;

  /// Throws Error(kSchemaError) unless temperature is exactly 0.
  void validate() const;
};

/// Rubric judges for S_p, S_w and FC. Each call parses `{"score": x}`
/// strictly, with one repair round. Holds references.
class Judge {
 public:
  Judge(const PromptLibrary& prompts, ChatProvider& provider, JudgeConfig config = {});

  double judge_personality(const IntensityMap& target, const IntensityMap& extracted) const;
  double judge_style(const IntensityMap& target, const IntensityMap& extracted) const;
  /// Throws Error(kPreconditionFailed) for an empty summary.
  double factual_consistency(std::string_view caption, std::string_view summary) const;

  const JudgeConfig& config() const noexcept { return config_; }

 private:
  double score(std::string_view prompt, std::string_view task, const TemplateVars& vars,
               std::map<std::string, std::string> context) const;
  double judge_maps(std::string_view prompt, std::string_view task, const IntensityMap& target,
                    const IntensityMap& extracted) const;

  const PromptLibrary& prompts_;
  ChatProvider& provider_;
  JudgeConfig config_;
};

/// A report together with the profile it was computed from.
struct CaptionScore {
  ToneProfile extracted;
  ScoreReport report;
};

/// The caption evaluator: extraction followed by every metric component.
class CaptionEvaluator {
 public:
  CaptionEvaluator(const ToneExtractor& extractor, const Judge& judge);

  /// Scores `caption` against `target`. Families outside `scope` are not
  /// judged and do not enter NAS. Throws Error(kPreconditionFailed) unless
  /// target.role is kTarget; target attributes are checked against the
  /// extractor's inventory.
  CaptionScore score_caption(std::string_view caption, std::string_view summary,
                             const ToneProfile& target,
                             NarrativeScope scope = NarrativeScope::kFull) const;

  const ToneExtractor& extractor() const noexcept { return extractor_; }
  const Judge& judge() const noexcept { return judge_; }

 private:
  const ToneExtractor& extractor_;
  const Judge& judge_;
};

}  // namespace roadtones
