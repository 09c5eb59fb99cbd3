#include "test_support.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>

#include "roadtones/corpus.hpp"
#include "roadtones/metrics.hpp"

namespace roadtones::testing {

std::filesystem::path data_dir() { return ROADTONES_TEST_DATA_DIR; }
std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(ROADTONES_TEST_FIXTURES_DIR) / name;
}
std::filesystem::path cli_path() { return ROADTONES_TEST_CLI; }

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  path_ = std::filesystem::temp_directory_path() /
          ("roadtones-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

const AttributeInventory& shipped_inventory() {
  static const AttributeInventory inventory = load_inventory(data_dir() / "inventory.json");
  return inventory;
}

const PromptLibrary& shipped_prompts() {
  static const PromptLibrary prompts = PromptLibrary::load(data_dir() / "prompts");
  return prompts;
}

MockStack::MockStack(MockOptions options, ExtractionConfig extraction)
    : provider(std::move(options)),
      extractor(shipped_inventory(), shipped_prompts(), provider, extraction),
      judge(shipped_prompts(), provider),
      evaluator(extractor, judge) {}

ToneCaptionGenerator MockStack::generator(GenerationConfig config) {
  return ToneCaptionGenerator(shipped_prompts(), provider, evaluator, config);
}

double Gen::intensity() {
  if (range(0, 4) == 0) return kBinEdges[static_cast<std::size_t>(range(0, 5))];
  return unit();
}

StructuralControls Gen::structural(int max_words) {
  StructuralControls s;
  s.informativeness = intensity();
  s.word_count = range(1, max_words);
  for (auto a : kBinaryAttributes) s.set(a, coin());
  return s;
}

ToneProfile Gen::profile(std::size_t max_traits, std::size_t max_styles) {
  const auto& inv = shipped_inventory();
  ToneProfile p;
  const auto traits = inv.personality_traits();
  const auto styles = inv.writing_styles();
  const auto n_traits = static_cast<std::size_t>(range(0, static_cast<int>(max_traits)));
  const auto n_styles = static_cast<std::size_t>(range(0, static_cast<int>(max_styles)));
  for (std::size_t i = 0; i < n_traits; ++i) {
    p.personality[traits[static_cast<std::size_t>(range(0, static_cast<int>(traits.size()) - 1))]] = intensity();
  }
  for (std::size_t i = 0; i < n_styles; ++i) {
    p.writing_style[styles[static_cast<std::size_t>(range(0, static_cast<int>(styles.size()) - 1))]] = intensity();
  }
  p.structural = structural();
  return p;
}

ScoreReport Gen::report() {
  std::optional<double> s_p, s_w;
  switch (range(0, 2)) {
    case 0:
      s_p = unit();
      s_w = unit();
      break;
    case 1:
      s_w = unit();
      break;
    default:
      s_p = unit();
      break;
  }
  const auto target = structural();
  const auto measured = structural();
  return assemble_report(s_p, s_w, structural_alignment(target, measured), unit());
}

DatasetRecord synthetic_record(const std::string& video_id, int variant, Gen& gen) {
  DatasetRecord r;
  r.video_id = video_id;
  r.variant = variant;
  r.tone_source = video_id + "-n" + std::to_string(variant);
  r.summary = "A car brakes hard at a crossing in video " + video_id + ".";
  r.generation_target = gen.profile();
  r.profile = gen.profile();
  r.profile.role = ProfileRole::kExtracted;
  for (int stage = 1; stage <= 2; ++stage) {
    StageResult s;
    s.stage = stage;
    s.controls = stage == 1 ? std::vector{ControlFamily::kWritingStyle, ControlFamily::kStructural}
                            : std::vector{ControlFamily::kPersonality};
    s.scope = stage == 1 ? NarrativeScope::kWritingStyleOnly : NarrativeScope::kFull;
    CaptionCandidate c;
    c.text = "stage " + std::to_string(stage) + " caption for " + video_id + " #" + std::to_string(variant);
    c.stage = stage;
    c.extracted = r.profile;
    c.report = gen.report();
    s.candidates.push_back(c);
    r.stages.push_back(s);
  }
  r.final_stage = gen.coin() ? 2 : 1;
  r.final_caption = r.stages[static_cast<std::size_t>(r.final_stage - 1)].candidates[0].text;
  return r;
}

double sas_oracle(const StructuralControls& t, const StructuralControls& m) {
  const long double e_i = m.informativeness > t.informativeness
                              ? static_cast<long double>(m.informativeness) - t.informativeness
                              : static_cast<long double>(t.informativeness) - m.informativeness;
  const long double gap = m.word_count > t.word_count ? m.word_count - t.word_count
                                                      : t.word_count - m.word_count;
  long double e_len = gap / static_cast<long double>(t.word_count);
  if (e_len > 1.0L) e_len = 1.0L;
  const int mismatches = (t.hashtags != m.hashtags) + (t.emojis != m.emojis) +
                         (t.user_mentions != m.user_mentions) + (t.location != m.location) +
                         (t.date_time != m.date_time) + (t.first_person != m.first_person);
  return static_cast<double>((8.0L - e_i - e_len - mismatches) / 8.0L);
}

double brute_force_max_min(const ToneProfile& reference, std::span<const ToneCandidate> candidates,
                           std::size_t m, const ToneDistance& distance) {
  const std::size_t n = candidates.size();
  double best = -1.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != m) continue;
    double value = 2.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1u)) continue;
      value = std::min(value, distance(candidates[i].profile, reference));
      for (std::size_t j = i + 1; j < n; ++j) {
        if (mask >> j & 1u) value = std::min(value, distance(candidates[i].profile, candidates[j].profile));
      }
    }
    best = std::max(best, value);
  }
  return best;
}

double max_min_value(const ToneProfile& reference, std::span<const SelectedTone> picks,
                     const ToneDistance& distance) {
  double value = 2.0;
  for (std::size_t i = 0; i < picks.size(); ++i) {
    value = std::min(value, distance(picks[i].profile, reference));
    for (std::size_t j = 0; j < i; ++j) value = std::min(value, distance(picks[i].profile, picks[j].profile));
  }
  return value;
}

nlohmann::json sample_spec_wire() {
  return nlohmann::json::parse(R"({
    "Personality": {"Anxious": 0.8, "Angry": 0.4, "Emotional": 0.5},
    "Writing Style": {"Exaggeration": 0.5, "Judgemental": 0.3, "Conversational": 0.75, "Factual": 0.1},
    "Informativeness": 0.4,
    "Structural Attributes": {"User Mentions": "no", "Hashtags": "yes", "Emojis": "yes",
                              "Date/Time": "no", "Location": "no", "First-Person Perspective": "yes"},
    "word_count": 17})");
}

std::vector<CorpusRecord> fixture_corpus() { return ingest_corpus(fixture_path("corpus_10.jsonl")); }

}  // namespace roadtones::testing
