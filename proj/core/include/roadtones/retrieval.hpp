#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roadtones/provider.hpp"
#include "roadtones/tone_schema.hpp"

namespace roadtones {

class Judge;

struct SummaryEmbedding {
  std::string video_id;
  std::vector<double> vector;
  std::string provider_tag;
};

/// Throws Error(kPreconditionFailed) for an empty summary and
/// Error(kUpstreamError) for a vector with non-finite entries.
SummaryEmbedding embed_summary(std::string video_id, std::string_view summary,
                               EmbeddingProvider& provider);

/// Cosine similarity; 0 when either vector has zero norm.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Summary vectors keyed by video id. Single writer while building, then
/// read-only.
class EmbeddingIndex {
 public:
  /// Throws Error(kSchemaError) for a duplicate id, a dimension change or a
  /// non-finite entry.
  void add(SummaryEmbedding embedding);

  /// Embeds every (video_id, summary) pair in batches of `batch_size`.
  static EmbeddingIndex build(std::span<const std::pair<std::string, std::string>> summaries,
                              EmbeddingProvider& provider, std::size_t batch_size = 64);

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  bool contains(std::string_view video_id) const;
  const SummaryEmbedding& get(std::string_view video_id) const;
  /// Entries in ascending video id order.
  const std::map<std::string, SummaryEmbedding, std::less<>>& entries() const noexcept { return entries_; }

  /// JSONL of {video_id, vector}.
  void save(const std::filesystem::path& path) const;
  static EmbeddingIndex load(const std::filesystem::path& path);

 private:
  std::map<std::string, SummaryEmbedding, std::less<>> entries_;
  std::size_t dimension_ = 0;
};

struct Neighbor {
  std::string video_id;
  double similarity = 0.0;
};

struct NeighborSet {
  std::string reference;
  std::vector<Neighbor> neighbors;  // descending similarity, ties by ascending id
};

/// Top-k by cosine, excluding the reference. Throws Error(kUnknownVideo) or
/// Error(kKTooLarge) when k >= index size; k must be positive.
NeighborSet knn_neighbors(const EmbeddingIndex& index, std::string_view reference, std::size_t k);

struct DissimilarityOptions {
  /// Weight of the structural controls (informativeness and the six
  /// toggles) appended to the narrative vector. 0 keeps them out.
  double structural_weight = 0.0;
};

/// 1 - cosine between the personality-plus-style vectors over the key
/// union. Two empty vectors are identical (0); one empty vector is
/// orthogonal to any other (1).
double tone_dissimilarity(const ToneProfile& a, const ToneProfile& b,
                          const DissimilarityOptions& options = {});

/// As above after checking both profiles against `inventory`; throws
/// Error(kInventoryMismatch) if either uses a name it does not list.
double tone_dissimilarity(const ToneProfile& a, const ToneProfile& b,
                          const AttributeInventory& inventory,
                          const DissimilarityOptions& options = {});

using ToneDistance = std::function<double(const ToneProfile&, const ToneProfile&)>;

/// The default cosine distance.
ToneDistance cosine_tone_distance(DissimilarityOptions options = {});

/// 1 - NAS, with the first profile as the target and the second as the
/// extracted side of both narrative judges.
ToneDistance judge_tone_distance(const Judge& judge);

struct ToneCandidate {
  std::string id;
  ToneProfile profile;
};

struct SelectedTone {
  std::string id;
  ToneProfile profile;
  /// Distance to the nearest of the reference and earlier picks.
  double min_distance = 0.0;
};

inline constexpr std::size_t kDefaultNeighborCount = 8;
inline constexpr std::size_t kDefaultToneCount = 3;

/// Greedy max-min selection: each pick maximizes its minimum distance to the
/// reference and the earlier picks; ties go to the smaller id. Throws
/// Error(kNotEnoughCandidates) when m exceeds the candidate count and
/// Error(kPreconditionFailed) for m == 0 or duplicate ids.
std::vector<SelectedTone> select_distinct_tones(const ToneProfile& reference,
                                                std::span<const ToneCandidate> candidates,
                                                std::size_t m,
                                                const ToneDistance& distance = cosine_tone_distance());

}  // namespace roadtones
