#include <gtest/gtest.h>

#include "roadtones/error.hpp"
#include "roadtones/tcgen.hpp"
#include "test_support.hpp"

namespace rt = roadtones;
using F = rt::ControlFamily;
using rt::testing::MockStack;

namespace {

constexpr const char* kSummary =
    "A delivery truck swerves across two lanes on the highway and a cyclist brakes hard to avoid it.";

rt::ToneProfile target() {
  rt::ToneProfile t;
  t.personality = {{"Caring", 0.7}, {"Anxious", 0.5}};
  t.writing_style = {{"Advisory", 0.8}};
  t.structural.informativeness = 0.5;
  t.structural.word_count = 18;
  t.structural.hashtags = true;
  return t;
}

rt::CaptionCandidate candidate(int run, double overall, double fc) {
  rt::CaptionCandidate c;
  c.run_index = run;
  c.report.overall = overall;
  c.report.fc = fc;
  return c;
}

std::string all_text(const rt::ChatRequest& r) {
  std::string out;
  for (const auto& m : r.messages) out += m.content + "\n";
  return out;
}

}  // namespace

TEST(StagePlan, ModesMatchTheAblationTable) {
  using S = rt::NarrativeScope;
  const auto two = rt::stage_plan(rt::GenerationMode::kTwoStage);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].controls, (std::vector<F>{F::kWritingStyle, F::kStructural}));
  EXPECT_EQ(two[0].scope, S::kWritingStyleOnly);
  EXPECT_EQ(two[1].controls, (std::vector<F>{F::kPersonality}));
  EXPECT_EQ(two[1].scope, S::kFull);

  const auto rev = rt::stage_plan(rt::GenerationMode::kOrderReversed);
  ASSERT_EQ(rev.size(), 2u);
  EXPECT_EQ(rev[0].controls, (std::vector<F>{F::kPersonality, F::kStructural}));
  EXPECT_EQ(rev[1].controls, (std::vector<F>{F::kWritingStyle}));

  const auto single = rt::stage_plan(rt::GenerationMode::kSingleStage);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].controls, (std::vector<F>{F::kPersonality, F::kWritingStyle, F::kStructural}));
  EXPECT_EQ(single[0].scope, S::kFull);

  EXPECT_EQ(rt::stage_plan(rt::GenerationMode::kStyleOnly)[0].scope, S::kWritingStyleOnly);
  EXPECT_EQ(rt::stage_plan(rt::GenerationMode::kPersonalityOnly)[0].scope, S::kPersonalityOnly);
  EXPECT_EQ(rt::stage_plan(rt::GenerationMode::kPersonalityOnly).size(), 1u);
}

TEST(StagePlan, NamesRoundTrip) {
  for (auto m : {rt::GenerationMode::kTwoStage, rt::GenerationMode::kOrderReversed, rt::GenerationMode::kSingleStage,
                 rt::GenerationMode::kStyleOnly, rt::GenerationMode::kPersonalityOnly}) {
    EXPECT_EQ(rt::generation_mode_from_string(rt::to_string(m)), m);
  }
  EXPECT_THROW(rt::generation_mode_from_string("three_stage"), rt::Error);
  EXPECT_EQ(rt::control_family_from_string(rt::to_string(F::kStructural)), F::kStructural);
}

TEST(Prompt, PartialWireHoldsOnlyTheNamedFamilies) {
  const auto t = target();
  const std::vector<F> style{F::kWritingStyle};
  const auto w = rt::partial_wire(t, style);
  EXPECT_TRUE(w.contains("Writing Style"));
  EXPECT_FALSE(w.contains("Personality"));
  EXPECT_FALSE(w.contains("word_count"));
  const std::vector<F> structural{F::kStructural};
  const auto s = rt::partial_wire(t, structural);
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.at("word_count"), 18);
}

TEST(Prompt, StageTwoCarriesDraftAndConstraints) {
  const auto& prompts = rt::testing::shipped_prompts();
  const std::vector<F> p{F::kPersonality};
  const std::vector<F> ws{F::kWritingStyle, F::kStructural};
  EXPECT_THROW(rt::render_stage_prompt(prompts, 2, kSummary, target(), p), rt::Error);
  const auto prompt = rt::render_stage_prompt(prompts, 2, kSummary, target(), p, std::string("DRAFT-TEXT"), ws);
  EXPECT_NE(prompt.user.find("DRAFT-TEXT"), std::string::npos);
  EXPECT_NE(prompt.user.find(R"("Caring": 0.7)"), std::string::npos);
  EXPECT_NE(prompt.user.find(R"("Advisory": 0.8)"), std::string::npos);
  EXPECT_NE(prompt.user.find("exactly 18 whitespace-separated words"), std::string::npos);
  const auto first = rt::render_stage_prompt(prompts, 1, kSummary, target(), ws);
  EXPECT_EQ(first.user.find("Caring"), std::string::npos);
}

TEST(SelectBest, FcFloorThenOverallThenRunIndex) {
  const std::vector<rt::CaptionCandidate> gated{candidate(0, 0.9, 0.2), candidate(1, 0.6, 0.5), candidate(2, 0.7, 0.4)};
  EXPECT_EQ(rt::select_best(gated, 0.3), 2u);
  const std::vector<rt::CaptionCandidate> none_pass{candidate(0, 0.5, 0.1), candidate(1, 0.8, 0.2)};
  EXPECT_EQ(rt::select_best(none_pass, 0.3), 1u);
  const std::vector<rt::CaptionCandidate> tie{candidate(0, 0.5, 0.9), candidate(1, 0.5, 0.9)};
  EXPECT_EQ(rt::select_best(tie, 0.3), 0u);
  EXPECT_THROW(rt::select_best({}, 0.3), rt::Error);
}

TEST(Generator, TwoStageProvenance) {
  MockStack stack;
  auto gen = stack.generator({.n = 3});
  const auto result = gen.generate(kSummary, target());
  ASSERT_EQ(result.stages.size(), 2u);
  EXPECT_EQ(result.stages[0].candidates.size(), 3u);
  for (const auto& c : result.stages[0].candidates) {
    EXPECT_EQ(c.stage, 1);
    EXPECT_FALSE(c.report.s_p.has_value());
    EXPECT_TRUE(rt::satisfies_identities(c.report));
  }
  for (const auto& c : result.stages[1].candidates) {
    EXPECT_EQ(c.stage, 2);
    EXPECT_TRUE(c.report.s_p && c.report.s_w);
  }
  const auto& final_c = result.final_candidate;
  for (const auto& s : result.stages) EXPECT_GE(final_c.report.overall, s.best().report.overall);

  // Every stage-2 generation request is built on the stage-1 best.
  const auto draft = result.stages[0].best().text;
  int stage2_requests = 0;
  for (const auto& r : stack.provider.requests()) {
    if (r.task != rt::tasks::kGenerateCaption || !r.context.contains("prior_caption")) continue;
    ++stage2_requests;
    EXPECT_EQ(r.context.at("prior_caption"), draft);
    EXPECT_NE(all_text(r).find(draft), std::string::npos);
  }
  EXPECT_EQ(stage2_requests, 3);
}

TEST(Generator, AblationModesRunTheirStages) {
  for (auto mode : {rt::GenerationMode::kSingleStage, rt::GenerationMode::kStyleOnly,
                    rt::GenerationMode::kPersonalityOnly, rt::GenerationMode::kOrderReversed}) {
    MockStack stack;
    auto gen = stack.generator({.n = 2, .mode = mode});
    const auto result = gen.generate(kSummary, target());
    const auto plan = rt::stage_plan(mode);
    ASSERT_EQ(result.stages.size(), plan.size()) << rt::to_string(mode);
    for (std::size_t i = 0; i < plan.size(); ++i) {
      EXPECT_EQ(result.stages[i].controls, plan[i].controls);
      EXPECT_EQ(result.stages[i].scope, plan[i].scope);
      for (const auto& c : result.stages[i].candidates) EXPECT_EQ(c.report.scope, plan[i].scope);
    }
    if (plan.size() == 1) {
      EXPECT_THROW(gen.stage2_refine(kSummary, target(), result.stages[0]), rt::Error);
    }
  }
}

TEST(Generator, SerialAndParallelAgree) {
  MockStack a, b;
  const auto serial = a.generator({.n = 3, .parallel = false}).generate(kSummary, target());
  const auto parallel = b.generator({.n = 3, .parallel = true}).generate(kSummary, target());
  EXPECT_EQ(rt::to_json(serial).dump(), rt::to_json(parallel).dump());
}

TEST(Generator, FailedSlotsAreRecorded) {
  rt::MockOptions options;
  options.transient_failures = {{rt::tasks::kGenerateCaption, 2}};
  options.failure_code = rt::ErrorCode::kAuthError;  // not transient: no slot retry
  MockStack stack(options);
  auto gen = stack.generator({.n = 3, .parallel = false});
  const auto stage = gen.stage1_generate(kSummary, target());
  EXPECT_EQ(stage.candidates.size(), 1u);
  ASSERT_EQ(stage.failures.size(), 2u);
  EXPECT_EQ(stage.failures[0].code, "AuthError");
  EXPECT_EQ(stage.candidates[0].run_index, 2);
}

TEST(Generator, TransientFailureIsRetriedOnce) {
  rt::MockOptions options;
  options.transient_failures = {{rt::tasks::kGenerateCaption, 1}};
  MockStack stack(options);
  auto gen = stack.generator({.n = 1});
  const auto stage = gen.stage1_generate(kSummary, target());
  EXPECT_EQ(stage.candidates.size(), 1u);
  EXPECT_TRUE(stage.failures.empty());
}

TEST(Generator, AllSlotsFailing) {
  rt::MockOptions options;
  options.failing_tasks = {rt::tasks::kGenerateCaption};
  MockStack stack(options);
  try {
    stack.generator({.n = 2}).generate(kSummary, target());
    FAIL();
  } catch (const rt::Error& e) {
    EXPECT_EQ(e.code(), rt::ErrorCode::kAllCandidatesFailed);
  }
}

TEST(Generator, RejectsBadTargets) {
  MockStack stack;
  auto gen = stack.generator();
  auto bad = target();
  bad.personality["Telepathic"] = 0.4;
  EXPECT_THROW(gen.generate(kSummary, bad), rt::Error);
  auto extracted = target();
  extracted.role = rt::ProfileRole::kExtracted;
  EXPECT_THROW(gen.generate(kSummary, extracted), rt::Error);
  EXPECT_EQ(stack.provider.call_count(), 0u);
}

TEST(Generator, ConfigValidation) {
  rt::GenerationConfig c;
  c.n = 0;
  EXPECT_THROW(c.validate(), rt::Error);
  c.n = 1;
  c.temperature = 0.0;
  EXPECT_NO_THROW(c.validate());
  EXPECT_THROW(c.validate(true), rt::Error);
  c.fc_floor = 2;
  EXPECT_THROW(c.validate(), rt::Error);
}

TEST(Generator, StageJsonRoundTrip) {
  MockStack stack;
  const auto result = stack.generator({.n = 2}).generate(kSummary, target());
  for (const auto& s : result.stages) {
    const auto back = rt::stage_result_from_json(nlohmann::json::parse(rt::to_json(s).dump()));
    EXPECT_EQ(rt::to_json(back).dump(), rt::to_json(s).dump());
  }
  EXPECT_THROW(rt::stage_result_from_json(nlohmann::json::object()), rt::Error);
}
