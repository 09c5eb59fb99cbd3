#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "roadtones/dataset.hpp"
#include "roadtones/extraction.hpp"
#include "roadtones/judge.hpp"
#include "roadtones/mock_provider.hpp"
#include "roadtones/retrieval.hpp"
#include "roadtones/tcgen.hpp"
#include "roadtones/templates.hpp"
#include "roadtones/tone_schema.hpp"

namespace roadtones::testing {

std::filesystem::path data_dir();
std::filesystem::path fixture_path(const std::string& name);
std::filesystem::path cli_path();

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

const AttributeInventory& shipped_inventory();
const PromptLibrary& shipped_prompts();

/// Extractor, judges and evaluator over one MockProvider.
struct MockStack {
  explicit MockStack(MockOptions options = {}, ExtractionConfig extraction = {});

  ToneCaptionGenerator generator(GenerationConfig config = {});

  MockProvider provider;
  ToneExtractor extractor;
  Judge judge;
  CaptionEvaluator evaluator;
};

/// Hand-rolled generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return range(0, 1) == 1; }
  std::mt19937_64& engine() noexcept { return rng_; }

  /// Uniform on [0,1] with extra mass on bin edges.
  double intensity();
  StructuralControls structural(int max_words = 60);
  /// Sparse maps over the shipped inventory.
  ToneProfile profile(std::size_t max_traits = 4, std::size_t max_styles = 3);
  ScoreReport report();

 private:
  std::mt19937_64 rng_;
};

/// Synthetic record with both stage captions, as if built by the pipeline.
DatasetRecord synthetic_record(const std::string& video_id, int variant, Gen& gen);

/// Independent SAS: long-double arithmetic over (8 - errors) / 8, with the
/// binary attributes compared field by field.
double sas_oracle(const StructuralControls& target, const StructuralControls& measured);

/// Exhaustive max-min optimum: over every size-m subset, the smallest
/// distance among the subset and the reference, maximized.
double brute_force_max_min(const ToneProfile& reference, std::span<const ToneCandidate> candidates,
                           std::size_t m, const ToneDistance& distance);

/// The same objective for a given pick list.
double max_min_value(const ToneProfile& reference, std::span<const SelectedTone> picks,
                     const ToneDistance& distance);

/// Wire-form spec of the instruction-tuning sample: anxious, conversational,
/// hashtags and emojis on, first person, 17 words.
nlohmann::json sample_spec_wire();

/// The ten-video fixture.
std::vector<CorpusRecord> fixture_corpus();

}  // namespace roadtones::testing
