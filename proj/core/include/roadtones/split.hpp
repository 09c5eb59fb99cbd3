#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "roadtones/dataset.hpp"

namespace roadtones {

struct SplitRatios {
  double train = 0.7;
  double val = 0.2;
  double eval = 0.1;

  /// Throws Error(kRatioError) unless all parts are in [0,1] and sum to 1
  /// within 1e-9.
  void validate() const;
};

/// Assigns each distinct id a tag ("train", "val", "eval"). Ids are sorted,
/// shuffled with a seeded mt19937_64 Fisher-Yates pass, then cut at
/// round(train * V) and round(val * V); eval takes the rest.
std::map<std::string, std::string> split_videos(std::span<const std::string> video_ids,
                                                const SplitRatios& ratios, std::uint64_t seed);

/// Tags every record by its video, so all variants of a video share a tag.
std::vector<DatasetRecord> split_dataset(std::vector<DatasetRecord> records, const SplitRatios& ratios,
                                         std::uint64_t seed);

}  // namespace roadtones
