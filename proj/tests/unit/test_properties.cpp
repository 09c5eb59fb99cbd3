#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "roadtones/metrics.hpp"
#include "roadtones/retrieval.hpp"
#include "roadtones/sft.hpp"
#include "roadtones/split.hpp"
#include "roadtones/surface.hpp"
#include "roadtones/text_util.hpp"
#include "roadtones/tone_schema.hpp"
#include "test_support.hpp"

namespace rt = roadtones;
using rt::testing::Gen;

TEST(Properties, BinningIsMonotone) {
  Gen gen(1);
  for (int i = 0; i < 10000; ++i) {
    double a = gen.intensity();
    double b = gen.intensity();
    if (a > b) std::swap(a, b);
    EXPECT_LE(static_cast<int>(rt::bin_intensity(a)), static_cast<int>(rt::bin_intensity(b))) << a << " " << b;
  }
}

TEST(Properties, SasStaysInUnitInterval) {
  Gen gen(2);
  for (int i = 0; i < 5000; ++i) {
    auto t = gen.structural(200);
    auto m = gen.structural(400);
    const double sas = rt::structural_alignment(t, m).sas;
    ASSERT_GE(sas, 0.0);
    ASSERT_LE(sas, 1.0);
  }
}

TEST(Properties, SasIsOneOnlyForIdenticalControls) {
  Gen gen(3);
  for (int i = 0; i < 2000; ++i) {
    const auto t = gen.structural();
    EXPECT_DOUBLE_EQ(rt::structural_alignment(t, t).sas, 1.0);
    auto m = t;
    const auto attr = rt::kBinaryAttributes[static_cast<std::size_t>(gen.range(0, 5))];
    m.set(attr, !m.get(attr));
    EXPECT_DOUBLE_EQ(rt::structural_alignment(t, m).sas, 7.0 / 8.0);
  }
}

TEST(Properties, SurfaceIgnoresSurroundingWhitespace) {
  const std::vector<std::string> pieces{"road", "#Rage", "@Cops", "\U0001F697", "\U0001F1EC\U0001F1E7", "brake", "1️⃣", "x#y"};
  const std::vector<std::string> gaps{" ", "  ", "\t", "\n", "　"};
  Gen gen(4);
  for (int i = 0; i < 500; ++i) {
    std::string tight, loose;
    const int n = gen.range(0, 8);
    for (int k = 0; k < n; ++k) {
      const auto& piece = pieces[static_cast<std::size_t>(gen.range(0, static_cast<int>(pieces.size()) - 1))];
      tight += (k ? " " : "") + piece;
      loose += gaps[static_cast<std::size_t>(gen.range(0, 4))] + piece;
    }
    loose += gaps[static_cast<std::size_t>(gen.range(0, 4))];
    EXPECT_EQ(rt::extract_surface(tight), rt::extract_surface(loose)) << tight;
    EXPECT_EQ(rt::count_words(tight), n);
  }
}

TEST(Properties, GreedyPicksHaveNonIncreasingMargins) {
  Gen gen(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto ref = gen.profile();
    std::vector<rt::ToneCandidate> cands;
    const int n = gen.range(1, 8);
    for (int i = 0; i < n; ++i) cands.push_back({"c" + std::to_string(i), gen.profile()});
    const auto m = static_cast<std::size_t>(gen.range(1, n));
    const auto picks = rt::select_distinct_tones(ref, cands, m);
    ASSERT_EQ(picks.size(), m);
    std::set<std::string> ids;
    for (std::size_t i = 0; i < picks.size(); ++i) {
      EXPECT_TRUE(ids.insert(picks[i].id).second);
      if (i > 0) EXPECT_LE(picks[i].min_distance, picks[i - 1].min_distance + 1e-12);
    }
    EXPECT_LE(rt::testing::max_min_value(ref, picks, rt::cosine_tone_distance()),
              rt::testing::brute_force_max_min(ref, cands, m, rt::cosine_tone_distance()) + 1e-12);
  }
}

TEST(Properties, SplitPartitionsVideos) {
  Gen gen(6);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> ids;
    const int n = gen.range(0, 300);
    for (int i = 0; i < n; ++i) ids.push_back("id" + std::to_string(gen.range(0, 1000)));
    const double train = gen.unit();
    const double val = gen.unit() * (1.0 - train);
    const rt::SplitRatios ratios{train, val, 1.0 - train - val};
    const auto tags = rt::split_videos(ids, ratios, static_cast<std::uint64_t>(trial));
    const std::set<std::string> distinct(ids.begin(), ids.end());
    EXPECT_EQ(tags.size(), distinct.size());
    for (const auto& [id, tag] : tags) {
      EXPECT_TRUE(tag == "train" || tag == "val" || tag == "eval");
    }
  }
}

TEST(Properties, CotCountIsRoundedFraction) {
  Gen gen(7);
  for (int trial = 0; trial < 300; ++trial) {
    const double f = gen.intensity();
    const auto n = static_cast<std::size_t>(gen.range(0, 500));
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) count += rt::is_cot_index(i, f);
    EXPECT_EQ(count, static_cast<std::size_t>(std::floor(static_cast<double>(n) * f + 0.5))) << n << " " << f;
  }
}

TEST(Properties, DrawBelowStaysInRangeAndCoversIt) {
  std::mt19937_64 rng(8);
  for (std::uint64_t bound : {1ull, 2ull, 3ull, 7ull, 1000ull}) {
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 5000; ++i) {
      const auto x = rt::draw_below(rng, bound);
      ASSERT_LT(x, bound);
      seen.insert(x);
    }
    if (bound <= 7) EXPECT_EQ(seen.size(), bound);
  }
}

TEST(Properties, DominantAttributesRespectThresholds) {
  Gen gen(9);
  for (int i = 0; i < 1000; ++i) {
    const auto p = gen.profile(6, 5);
    const auto d = rt::dominant_attributes(p);
    for (const auto& t : d.traits) EXPECT_GE(p.personality.at(t), rt::kDominantTraitThreshold);
    for (const auto& s : d.styles) EXPECT_GE(p.writing_style.at(s), rt::kDominantStyleThreshold);
    std::size_t traits = 0;
    for (const auto& [k, v] : p.personality) traits += v >= rt::kDominantTraitThreshold;
    EXPECT_EQ(d.traits.size(), traits);
  }
}
