#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadtones/corpus.hpp"
#include "roadtones/extraction.hpp"
#include "roadtones/retrieval.hpp"
#include "roadtones/tcgen.hpp"

namespace roadtones {

/// One tone variant of one video. `profile` is the extracted profile of
/// `final_caption`; `generation_target` is the profile it was asked for.
struct DatasetRecord {
  std::string video_id;
  int variant = 0;
  std::string tone_source;  // neighbor whose tone was borrowed
  std::string summary;
  GenerationMode mode = GenerationMode::kTwoStage;
  ToneProfile generation_target;
  ToneProfile profile;
  std::string final_caption;
  int final_stage = 1;
  std::vector<StageResult> stages;
  std::string split;  // "train" | "val" | "eval", empty until assigned

  /// Best caption of the given stage, if that stage ran.
  std::optional<std::string> stage_caption(int stage) const;
  const StageResult* stage_result(int stage) const;
};

nlohmann::ordered_json to_json(const DatasetRecord& record);
DatasetRecord dataset_record_from_json(const nlohmann::json& doc);

/// JSONL, one record per line, in the given order.
void write_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records);
std::string dataset_to_jsonl(const std::vector<DatasetRecord>& records);
/// Throws Error(kSchemaError) with the line number as detail.
std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path);

struct BuildOptions {
  std::size_t k = kDefaultNeighborCount;
  std::size_t m = kDefaultToneCount;
  /// Videos processed at once.
  std::size_t parallel = 1;
  DissimilarityOptions dissimilarity;
  /// Use 1 - NAS from the judges instead of the cosine distance.
  bool judge_distance = false;
};

struct BuildFailure {
  std::string video_id;
  std::string code;
  std::string component;
  std::string message;
};

struct BuildReport {
  std::size_t videos = 0;
  std::size_t succeeded = 0;
  std::size_t records = 0;
  std::size_t extraction_cache_hits = 0;
  std::size_t extraction_cache_misses = 0;
  std::vector<BuildFailure> failures;  // ascending video id
};

nlohmann::ordered_json to_json(const BuildReport& report);

struct BuildOutput {
  std::vector<DatasetRecord> records;  // ascending (video_id, variant)
  BuildReport report;
};

/// Retrieval half of the per-video pipeline.
struct ToneSelection {
  NeighborSet neighbors;
  /// TX of the video's own caption; empty when it has none.
  ToneProfile reference;
  std::vector<SelectedTone> selected;
};

nlohmann::ordered_json to_json(const ToneSelection& selection);

/// Per-video pipeline: embed, k nearest neighbors, extract their tones,
/// pick m distinct ones, generate a caption for each. A video that fails at
/// any point contributes no records and one report entry; the build goes on.
class DatasetBuilder {
 public:
  DatasetBuilder(const ToneExtractor& extractor, const ToneCaptionGenerator& generator,
                 EmbeddingProvider& embedder, BuildOptions options = {},
                 const Judge* judge = nullptr);

  /// Throws Error(kKTooLarge) unless the corpus has more than k videos.
  BuildOutput build(const std::vector<CorpusRecord>& corpus) const;

  /// Neighbors and distinct tones for one video, without generation. Throws
  /// Error(kUnknownVideo) for an id not in the corpus.
  ToneSelection select_tones(const std::vector<CorpusRecord>& corpus, std::string_view video_id) const;

 private:
  ToneSelection select_for(const CorpusRecord& video, const EmbeddingIndex& index,
                           const std::map<std::string, const CorpusRecord*>& by_id) const;
  std::vector<DatasetRecord> build_video(const CorpusRecord& video, const EmbeddingIndex& index,
                                         const std::map<std::string, const CorpusRecord*>& by_id) const;
  ToneProfile cached_extract(const std::string& caption, const std::string& summary) const;

  const ToneExtractor& extractor_;
  const ToneCaptionGenerator& generator_;
  EmbeddingProvider& embedder_;
  BuildOptions options_;
  const Judge* judge_;

  mutable std::mutex cache_mutex_;
  mutable std::map<std::uint64_t, ToneProfile> cache_;
  mutable std::size_t hits_ = 0;
  mutable std::size_t misses_ = 0;
};

}  // namespace roadtones
