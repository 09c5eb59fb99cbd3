#include "roadtones/split.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "roadtones/error.hpp"
#include "roadtones/text_util.hpp"

namespace roadtones {
void SplitRatios::validate() const {
  for (double r : {train, val, eval}) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw Error(ErrorCode::kRatioError, "dataset", "split ratios must each be in [0,1]");
    }
  }
  if (std::abs(train + val + eval - 1.0) > 1e-9) {
    throw Error(ErrorCode::kRatioError, "dataset",
                "split ratios sum to " + format_double(train + val + eval) + ", not 1");
  }
}

std::map<std::string, std::string> split_videos(std::span<const std::string> video_ids,
                                                const SplitRatios& ratios, std::uint64_t seed) {
  ratios.validate();
  const std::set<std::string> unique(video_ids.begin(), video_ids.end());
  std::vector<std::string> ids(unique.begin(), unique.end());
  std::mt19937_64 rng(seed);
  for (std::size_t i = ids.size(); i > 1; --i) {
    std::swap(ids[i - 1], ids[draw_below(rng, i)]);
  }
  const auto total = static_cast<double>(ids.size());
  const auto n_train = std::min(ids.size(), static_cast<std::size_t>(std::llround(ratios.train * total)));
  const auto n_val =
      std::min(ids.size() - n_train, static_cast<std::size_t>(std::llround(ratios.val * total)));

  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out[ids[i]] = i < n_train ? "train" : i < n_train + n_val ? "val" : "eval";
  }
  return out;
}

std::vector<DatasetRecord> split_dataset(std::vector<DatasetRecord> records, const SplitRatios& ratios,
                                         std::uint64_t seed) {
  std::vector<std::string> ids;
  ids.reserve(records.size());
  for (const auto& r : records) ids.push_back(r.video_id);
  const auto tags = split_videos(ids, ratios, seed);
  for (auto& r : records) r.split = tags.at(r.video_id);
  return records;
}

}  // namespace roadtones
