#include <benchmark/benchmark.h>

#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "roadtones/metrics.hpp"
#include "roadtones/provider.hpp"
#include "roadtones/retrieval.hpp"
#include "roadtones/surface.hpp"
#include "roadtones/tone_schema.hpp"

namespace rt = roadtones;

namespace {

const std::vector<std::string> kStyles{"Factual", "Conversational", "Narrative", "Emotive", "Judgemental", "Advisory"};
const std::vector<std::string> kTraits{"Anxious", "Angry", "Caring", "Calm", "Brave", "Cheerful", "Cautious"};

rt::ToneProfile random_profile(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  rt::ToneProfile p;
  for (const auto& t : kTraits) {
    if (unit(rng) < 0.4) p.personality[t] = unit(rng);
  }
  for (const auto& s : kStyles) {
    if (unit(rng) < 0.5) p.writing_style[s] = unit(rng);
  }
  p.structural.word_count = 20;
  return p;
}

void BM_ExtractSurface(benchmark::State& state) {
  const std::string caption =
      "I seriously can’t believe how close that car came to hitting me today! \U0001F631 Some drivers… "
      "#CyclistLife @CityPolice \U0001F1EC\U0001F1E7 \U0001F44D\U0001F3FD";
  for (auto _ : state) benchmark::DoNotOptimize(rt::extract_surface(caption));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * caption.size()));
}
BENCHMARK(BM_ExtractSurface);

void BM_StructuralAlignment(benchmark::State& state) {
  rt::StructuralControls t, m;
  t.word_count = 17;
  t.informativeness = 0.4;
  t.hashtags = true;
  m.word_count = 21;
  m.informativeness = 0.55;
  m.emojis = true;
  for (auto _ : state) benchmark::DoNotOptimize(rt::structural_alignment(t, m));
}
BENCHMARK(BM_StructuralAlignment);

// Stands in for a real embedding endpoint with seeded random vectors.
class RandomEmbedder : public rt::EmbeddingProvider {
 public:
  explicit RandomEmbedder(std::size_t dim) : dim_(dim) {}
  std::vector<std::vector<double>> embed(std::span<const std::string> texts) override {
    std::vector<std::vector<double>> out;
    for (const auto& text : texts) {
      std::mt19937_64 rng(std::hash<std::string>{}(text));
      std::normal_distribution<double> normal;
      std::vector<double> v(dim_);
      for (auto& x : v) x = normal(rng);
      out.push_back(std::move(v));
    }
    return out;
  }
  std::string tag() const override { return "random-" + std::to_string(dim_); }

 private:
  std::size_t dim_;
};

void BM_KnnNeighbors(benchmark::State& state) {
  const auto size = static_cast<std::size_t>(state.range(0));
  std::vector<std::pair<std::string, std::string>> docs;
  for (std::size_t i = 0; i < size; ++i) docs.emplace_back("v" + std::to_string(i), "summary " + std::to_string(i));
  RandomEmbedder embedder(256);
  const auto index = rt::EmbeddingIndex::build(docs, embedder);
  for (auto _ : state) benchmark::DoNotOptimize(rt::knn_neighbors(index, "v0", 8));
}
BENCHMARK(BM_KnnNeighbors)->Arg(100)->Arg(1000)->Arg(10000);

void BM_SelectDistinctTones(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const auto reference = random_profile(rng);
  std::vector<rt::ToneCandidate> candidates;
  for (int i = 0; i < state.range(0); ++i) candidates.push_back({"c" + std::to_string(i), random_profile(rng)});
  for (auto _ : state) benchmark::DoNotOptimize(rt::select_distinct_tones(reference, candidates, 3));
}
BENCHMARK(BM_SelectDistinctTones)->Arg(8)->Arg(32)->Arg(128);

}  // namespace
BENCHMARK_MAIN();
