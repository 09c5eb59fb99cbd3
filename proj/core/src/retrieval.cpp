#include "roadtones/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "roadtones/error.hpp"
#include "roadtones/judge.hpp"
#include "roadtones/text_util.hpp"

namespace roadtones {
namespace {

constexpr std::string_view kComponent = "retrieval";

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Sparse vector over prefixed keys so a trait and a style with the same name
// stay distinct dimensions.
std::map<std::string, double> tone_vector(const ToneProfile& p, double structural_weight) {
  std::map<std::string, double> v;
  for (const auto& [k, x] : p.personality) {
    if (x != 0.0) v["P:" + k] = x;
  }
  for (const auto& [k, x] : p.writing_style) {
    if (x != 0.0) v["W:" + k] = x;
  }
  if (structural_weight > 0.0) {
    const auto& s = p.structural;
    if (s.informativeness != 0.0) v["S:informativeness"] = structural_weight * s.informativeness;
    for (auto a : kBinaryAttributes) {
      if (s.get(a)) v["S:" + std::string(attribute_key(a))] = structural_weight;
    }
  }
  return v;
}

}  // namespace

SummaryEmbedding embed_summary(std::string video_id, std::string_view summary,
                               EmbeddingProvider& provider) {
  if (trim(summary).empty()) {
    throw Error(ErrorCode::kPreconditionFailed, std::string(kComponent),
                "summary for " + video_id + " is empty");
  }
  const std::vector<std::string> batch{std::string(summary)};
  auto vectors = provider.embed(batch);
  if (vectors.size() != 1 || vectors.front().empty() || !all_finite(vectors.front())) {
    throw Error(ErrorCode::kUpstreamError, std::string(kComponent),
                "embedding provider returned an unusable vector for " + video_id, "malformed");
  }
  return {std::move(video_id), std::move(vectors.front()), provider.tag()};
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  const auto n = std::min(a.size(), b.size());
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < n; ++i) dot += a[i] * b[i];
  for (double x : a) na += x * x;
  for (double x : b) nb += x * x;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

void EmbeddingIndex::add(SummaryEmbedding embedding) {
  if (entries_.contains(embedding.video_id)) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                "duplicate video id " + embedding.video_id, embedding.video_id);
  }
  if (embedding.vector.empty() || !all_finite(embedding.vector)) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                "embedding for " + embedding.video_id + " is empty or not finite", embedding.video_id);
  }
  if (dimension_ != 0 && embedding.vector.size() != dimension_) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                "embedding for " + embedding.video_id + " has dimension " +
                    std::to_string(embedding.vector.size()) + ", index uses " + std::to_string(dimension_),
                embedding.video_id);
  }
  dimension_ = embedding.vector.size();
  auto id = embedding.video_id;
  entries_.emplace(std::move(id), std::move(embedding));
}

EmbeddingIndex EmbeddingIndex::build(std::span<const std::pair<std::string, std::string>> summaries,
                                     EmbeddingProvider& provider, std::size_t batch_size) {
  batch_size = std::max<std::size_t>(batch_size, 1);
  EmbeddingIndex index;
  const auto tag = provider.tag();
  for (std::size_t start = 0; start < summaries.size(); start += batch_size) {
    const auto end = std::min(summaries.size(), start + batch_size);
    std::vector<std::string> texts;
    for (auto i = start; i < end; ++i) {
      if (trim(summaries[i].second).empty()) {
        throw Error(ErrorCode::kPreconditionFailed, std::string(kComponent),
                    "summary for " + summaries[i].first + " is empty");
      }
      texts.push_back(summaries[i].second);
    }
    auto vectors = provider.embed(texts);
    if (vectors.size() != texts.size()) {
      throw Error(ErrorCode::kUpstreamError, std::string(kComponent),
                  "embedding provider returned " + std::to_string(vectors.size()) + " vectors for " +
                      std::to_string(texts.size()) + " inputs",
                  "malformed");
    }
    for (auto i = start; i < end; ++i) {
      index.add({summaries[i].first, std::move(vectors[i - start]), tag});
    }
  }
  return index;
}

bool EmbeddingIndex::contains(std::string_view video_id) const { return entries_.find(video_id) != entries_.end(); }

const SummaryEmbedding& EmbeddingIndex::get(std::string_view video_id) const {
  const auto it = entries_.find(video_id);
  if (it == entries_.end()) {
    throw Error(ErrorCode::kUnknownVideo, std::string(kComponent),
                "video " + std::string(video_id) + " is not in the index", std::string(video_id));
  }
  return it->second;
}

void EmbeddingIndex::save(const std::filesystem::path& path) const {
  std::string body;
  for (const auto& [id, e] : entries_) {
    nlohmann::ordered_json line;
    line["video_id"] = id;
    line["vector"] = e.vector;
    if (!e.provider_tag.empty()) line["provider"] = e.provider_tag;
    body += line.dump() + "\n";
  }
  write_text_file(path, body);
}

EmbeddingIndex EmbeddingIndex::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, std::string(kComponent), "cannot read " + path.string());
  EmbeddingIndex index;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    try {
      const auto doc = nlohmann::json::parse(line);
      index.add({doc.at("video_id").get<std::string>(), doc.at("vector").get<std::vector<double>>(),
                 doc.value("provider", "")});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                  path.string() + ":" + std::to_string(number) + ": " + e.what(), std::to_string(number));
    }
  }
  return index;
}

NeighborSet knn_neighbors(const EmbeddingIndex& index, std::string_view reference, std::size_t k) {
  const auto& ref = index.get(reference);
  if (k == 0) {
    throw Error(ErrorCode::kPreconditionFailed, std::string(kComponent), "k must be positive");
  }
  if (k >= index.size()) {
    throw Error(ErrorCode::kKTooLarge, std::string(kComponent),
                "k = " + std::to_string(k) + " needs more than " + std::to_string(index.size()) +
                    " indexed videos");
  }
  NeighborSet out;
  out.reference = ref.video_id;
  for (const auto& [id, e] : index.entries()) {
    if (id == ref.video_id) continue;
    out.neighbors.push_back({id, cosine_similarity(ref.vector, e.vector)});
  }
  std::stable_sort(out.neighbors.begin(), out.neighbors.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.similarity != b.similarity ? a.similarity > b.similarity : a.video_id < b.video_id;
  });
  out.neighbors.resize(k);
  return out;
}

double tone_dissimilarity(const ToneProfile& a, const ToneProfile& b, const DissimilarityOptions& options) {
  const auto va = tone_vector(a, options.structural_weight);
  const auto vb = tone_vector(b, options.structural_weight);
  if (va.empty() && vb.empty()) return 0.0;
  if (va.empty() || vb.empty()) return 1.0;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [k, x] : va) {
    na += x * x;
    if (const auto it = vb.find(k); it != vb.end()) dot += x * it->second;
  }
  for (const auto& [k, x] : vb) nb += x * x;
  const double cosine = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(1.0 - cosine, 0.0, 1.0);
}

double tone_dissimilarity(const ToneProfile& a, const ToneProfile& b, const AttributeInventory& inventory,
                          const DissimilarityOptions& options) {
  for (const auto* p : {&a, &b}) {
    try {
      validate_profile(*p, inventory);
    } catch (const Error& e) {
      throw Error(ErrorCode::kInventoryMismatch, std::string(kComponent),
                  std::string("profile does not match the inventory: ") + e.what(), e.detail());
    }
  }
  return tone_dissimilarity(a, b, options);
}

ToneDistance cosine_tone_distance(DissimilarityOptions options) {
  return [options](const ToneProfile& a, const ToneProfile& b) { return tone_dissimilarity(a, b, options); };
}

ToneDistance judge_tone_distance(const Judge& judge) {
  return [&judge](const ToneProfile& a, const ToneProfile& b) {
    const double s_p = judge.judge_personality(a.personality, b.personality);
    const double s_w = judge.judge_style(a.writing_style, b.writing_style);
    return 1.0 - narrative_alignment(s_w, s_p);
  };
}

std::vector<SelectedTone> select_distinct_tones(const ToneProfile& reference,
                                                std::span<const ToneCandidate> candidates, std::size_t m,
                                                const ToneDistance& distance) {
  if (m == 0) {
    throw Error(ErrorCode::kPreconditionFailed, std::string(kComponent), "m must be positive");
  }
  if (m > candidates.size()) {
    throw Error(ErrorCode::kNotEnoughCandidates, std::string(kComponent),
                "cannot select " + std::to_string(m) + " tones from " + std::to_string(candidates.size()) +
                    " candidates");
  }
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return candidates[x].id < candidates[y].id; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (candidates[order[i]].id == candidates[order[i - 1]].id) {
      throw Error(ErrorCode::kPreconditionFailed, std::string(kComponent),
                  "duplicate candidate id " + candidates[order[i]].id);
    }
  }

  // nearest[i] = distance from candidate i to the closest chosen profile,
  // with the reference always chosen.
  std::vector<double> nearest(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) nearest[i] = distance(candidates[i].profile, reference);
  std::vector<bool> taken(candidates.size(), false);
  std::vector<SelectedTone> out;
  while (out.size() < m) {
    std::size_t best = candidates.size();
    for (auto i : order) {
      if (taken[i]) continue;
      if (best == candidates.size() || nearest[i] > nearest[best]) best = i;
    }
    taken[best] = true;
    out.push_back({candidates[best].id, candidates[best].profile, nearest[best]});
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (!taken[i]) nearest[i] = std::min(nearest[i], distance(candidates[i].profile, candidates[best].profile));
    }
  }
  return out;
}

}  // namespace roadtones
