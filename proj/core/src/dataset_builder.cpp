#include "roadtones/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <thread>

#include "roadtones/error.hpp"
#include "roadtones/judge.hpp"
#include "roadtones/text_util.hpp"

namespace roadtones {
namespace {

constexpr std::string_view kComponent = "dataset";

ToneProfile as_target(ToneProfile profile) {
  profile.role = ProfileRole::kTarget;
  profile.structural.word_count = std::max(profile.structural.word_count, 1);
  return profile;
}

}  // namespace

std::optional<std::string> DatasetRecord::stage_caption(int stage) const {
  if (const auto* s = stage_result(stage)) return s->best().text;
  return std::nullopt;
}

const StageResult* DatasetRecord::stage_result(int stage) const {
  for (const auto& s : stages) {
    if (s.stage == stage && !s.candidates.empty()) return &s;
  }
  return nullptr;
}

nlohmann::ordered_json to_json(const DatasetRecord& r) {
  nlohmann::ordered_json doc;
  doc["video_id"] = r.video_id;
  doc["variant"] = r.variant;
  doc["tone_source"] = r.tone_source;
  doc["split"] = r.split.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.split);
  doc["mode"] = to_string(r.mode);
  doc["summary"] = r.summary;
  doc["profile"] = to_wire(r.profile);
  doc["generation_target"] = to_wire(r.generation_target);
  doc["final_caption"] = r.final_caption;
  doc["final_stage"] = r.final_stage;
  const auto s1 = r.stage_caption(1);
  const auto s2 = r.stage_caption(2);
  doc["stage1_caption"] = s1 ? nlohmann::ordered_json(*s1) : nlohmann::ordered_json(nullptr);
  doc["stage2_caption"] = s2 ? nlohmann::ordered_json(*s2) : nlohmann::ordered_json(nullptr);
  auto& stages = doc["stages"] = nlohmann::ordered_json::array();
  for (const auto& s : r.stages) stages.push_back(to_json(s));
  return doc;
}

DatasetRecord dataset_record_from_json(const nlohmann::json& doc) {
  try {
    DatasetRecord r;
    r.video_id = doc.at("video_id").get<std::string>();
    r.variant = doc.value("variant", 0);
    r.tone_source = doc.value("tone_source", "");
    if (doc.contains("split") && doc.at("split").is_string()) r.split = doc.at("split").get<std::string>();
    r.mode = generation_mode_from_string(doc.value("mode", "two_stage"));
    r.summary = doc.at("summary").get<std::string>();
    r.profile = profile_from_wire(doc.at("profile"), ProfileRole::kExtracted);
    if (doc.contains("generation_target")) {
      r.generation_target = profile_from_wire(doc.at("generation_target"), ProfileRole::kTarget);
    }
    r.final_caption = doc.at("final_caption").get<std::string>();
    r.final_stage = doc.value("final_stage", 1);
    if (doc.contains("stages")) {
      for (const auto& s : doc.at("stages")) r.stages.push_back(stage_result_from_json(s));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                std::string("malformed dataset record: ") + e.what());
  }
}

std::string dataset_to_jsonl(const std::vector<DatasetRecord>& records) {
  std::string body;
  for (const auto& r : records) body += to_json(r).dump() + "\n";
  return body;
}

void write_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records) {
  write_text_file(path, dataset_to_jsonl(records));
}

std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, std::string(kComponent), "cannot read " + path.string());
  std::vector<DatasetRecord> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    try {
      out.push_back(dataset_record_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                  path.string() + ":" + std::to_string(number) + ": " + e.what(), std::to_string(number));
    } catch (const Error& e) {
      throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                  path.string() + ":" + std::to_string(number) + ": " + e.what(), std::to_string(number));
    }
  }
  return out;
}

nlohmann::ordered_json to_json(const ToneSelection& selection) {
  nlohmann::ordered_json doc;
  doc["video_id"] = selection.neighbors.reference;
  auto neighbors = nlohmann::ordered_json::array();
  for (const auto& n : selection.neighbors.neighbors) {
    neighbors.push_back({{"video_id", n.video_id}, {"similarity", n.similarity}});
  }
  doc["neighbors"] = std::move(neighbors);
  doc["reference"] = to_wire(selection.reference);
  auto selected = nlohmann::ordered_json::array();
  for (const auto& t : selection.selected) {
    selected.push_back({{"tone_source", t.id}, {"min_distance", t.min_distance}, {"profile", to_wire(t.profile)}});
  }
  doc["selected"] = std::move(selected);
  return doc;
}

nlohmann::ordered_json to_json(const BuildReport& report) {
  nlohmann::ordered_json doc;
  doc["videos"] = report.videos;
  doc["succeeded"] = report.succeeded;
  doc["records"] = report.records;
  doc["extraction_cache"] = {{"hits", report.extraction_cache_hits},
                             {"misses", report.extraction_cache_misses}};
  auto& failures = doc["failures"] = nlohmann::ordered_json::array();
  for (const auto& f : report.failures) {
    failures.push_back(
        {{"video_id", f.video_id}, {"code", f.code}, {"component", f.component}, {"message", f.message}});
  }
  return doc;
}

DatasetBuilder::DatasetBuilder(const ToneExtractor& extractor, const ToneCaptionGenerator& generator,
                               EmbeddingProvider& embedder, BuildOptions options, const Judge* judge)
    : extractor_(extractor),
      generator_(generator),
      embedder_(embedder),
      options_(std::move(options)),
      judge_(judge) {
  if (options_.judge_distance && judge_ == nullptr) {
    throw Error(ErrorCode::kPreconditionFailed, std::string(kComponent),
                "judge distance requested without a judge");
  }
}

ToneProfile DatasetBuilder::cached_extract(const std::string& caption, const std::string& summary) const {
  const auto key = fnv1a64(caption + '\x1f' + summary);
  {
    std::lock_guard lock(cache_mutex_);
    if (const auto it = cache_.find(key); it != cache_.end()) {
      ++hits_;
      return it->second;
    }
    ++misses_;
  }
  auto profile = extractor_.extract_tone_profile(caption, summary);
  std::lock_guard lock(cache_mutex_);
  cache_.emplace(key, profile);
  return profile;
}

ToneSelection DatasetBuilder::select_for(const CorpusRecord& video, const EmbeddingIndex& index,
                                        const std::map<std::string, const CorpusRecord*>& by_id) const {
  ToneSelection out;
  out.neighbors = knn_neighbors(index, video.video_id, options_.k);
  if (video.source_caption) out.reference = cached_extract(*video.source_caption, video.summary);

  std::vector<ToneCandidate> candidates;
  for (const auto& n : out.neighbors.neighbors) {
    const auto* neighbor = by_id.at(n.video_id);
    if (!neighbor->source_caption) continue;
    candidates.push_back({n.video_id, cached_extract(*neighbor->source_caption, neighbor->summary)});
  }
  const auto distance = options_.judge_distance ? judge_tone_distance(*judge_)
                                                : cosine_tone_distance(options_.dissimilarity);
  out.selected = select_distinct_tones(out.reference, candidates, options_.m, distance);
  return out;
}

ToneSelection DatasetBuilder::select_tones(const std::vector<CorpusRecord>& corpus,
                                           std::string_view video_id) const {
  std::vector<std::pair<std::string, std::string>> summaries;
  std::map<std::string, const CorpusRecord*> by_id;
  for (const auto& r : corpus) {
    summaries.emplace_back(r.video_id, r.summary);
    by_id.emplace(r.video_id, &r);
  }
  const auto it = by_id.find(std::string(video_id));
  if (it == by_id.end()) {
    throw Error(ErrorCode::kUnknownVideo, std::string(kComponent), "no video '" + std::string(video_id) + "'");
  }
  const auto index = EmbeddingIndex::build(summaries, embedder_);
  return select_for(*it->second, index, by_id);
}

std::vector<DatasetRecord> DatasetBuilder::build_video(
    const CorpusRecord& video, const EmbeddingIndex& index,
    const std::map<std::string, const CorpusRecord*>& by_id) const {
  const auto selected = select_for(video, index, by_id).selected;

  std::vector<DatasetRecord> records;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const auto target = as_target(selected[i].profile);
    auto result = generator_.generate(video.summary, target);
    DatasetRecord r;
    r.video_id = video.video_id;
    r.variant = static_cast<int>(i);
    r.tone_source = selected[i].id;
    r.summary = video.summary;
    r.mode = result.mode;
    r.generation_target = target;
    r.profile = result.final_candidate.extracted;
    r.final_caption = result.final_candidate.text;
    r.final_stage = result.final_candidate.stage;
    r.stages = std::move(result.stages);
    records.push_back(std::move(r));
  }
  return records;
}

BuildOutput DatasetBuilder::build(const std::vector<CorpusRecord>& corpus) const {
  if (corpus.size() <= options_.k) {
    throw Error(ErrorCode::kKTooLarge, std::string(kComponent),
                "corpus has " + std::to_string(corpus.size()) + " videos; k = " + std::to_string(options_.k) +
                    " needs more");
  }
  std::vector<std::pair<std::string, std::string>> summaries;
  std::map<std::string, const CorpusRecord*> by_id;
  for (const auto& r : corpus) {
    summaries.emplace_back(r.video_id, r.summary);
    by_id.emplace(r.video_id, &r);
  }
  const auto index = EmbeddingIndex::build(summaries, embedder_);

  std::vector<const CorpusRecord*> order;
  for (const auto& [id, r] : by_id) order.push_back(r);
  std::vector<std::vector<DatasetRecord>> per_video(order.size());
  std::vector<std::optional<BuildFailure>> failures(order.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < order.size(); i = next++) {
      try {
        per_video[i] = build_video(*order[i], index, by_id);
      } catch (const Error& e) {
        failures[i] = BuildFailure{order[i]->video_id, std::string(to_string(e.code())), e.component(), e.what()};
      }
    }
  };
  const auto threads = std::clamp<std::size_t>(options_.parallel, 1, order.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  BuildOutput out;
  out.report.videos = order.size();
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (failures[i]) {
      out.report.failures.push_back(std::move(*failures[i]));
      continue;
    }
    ++out.report.succeeded;
    for (auto& r : per_video[i]) out.records.push_back(std::move(r));
  }
  out.report.records = out.records.size();
  {
    std::lock_guard lock(cache_mutex_);
    out.report.extraction_cache_hits = hits_;
    out.report.extraction_cache_misses = misses_;
  }
  return out;
}

}  // namespace roadtones
