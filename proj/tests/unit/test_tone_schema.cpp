#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "roadtones/error.hpp"
#include "roadtones/tone_schema.hpp"
#include "test_support.hpp"

namespace rt = roadtones;
using rt::testing::Gen;
using rt::testing::shipped_inventory;

namespace {

rt::ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const rt::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected rt::Error";
  return rt::ErrorCode::kNotFound;
}

}  // namespace

TEST(Binning, InteriorPoints) {
  EXPECT_EQ(rt::bin_intensity(0.1), rt::IntensityLevel::kAbsent);
  EXPECT_EQ(rt::bin_intensity(0.3), rt::IntensityLevel::kSubtle);
  EXPECT_EQ(rt::bin_intensity(0.5), rt::IntensityLevel::kModerate);
  EXPECT_EQ(rt::bin_intensity(0.7), rt::IntensityLevel::kStrong);
  EXPECT_EQ(rt::bin_intensity(0.9), rt::IntensityLevel::kVeryStrong);
}

TEST(Binning, EdgesBelongToTheUpperBinExceptOne) {
  EXPECT_EQ(rt::bin_intensity(0.0), rt::IntensityLevel::kAbsent);
  EXPECT_EQ(rt::bin_intensity(0.2), rt::IntensityLevel::kSubtle);
  EXPECT_EQ(rt::bin_intensity(0.4), rt::IntensityLevel::kModerate);
  EXPECT_EQ(rt::bin_intensity(0.6), rt::IntensityLevel::kStrong);
  EXPECT_EQ(rt::bin_intensity(0.8), rt::IntensityLevel::kVeryStrong);
  EXPECT_EQ(rt::bin_intensity(1.0), rt::IntensityLevel::kVeryStrong);
  EXPECT_EQ(rt::bin_intensity(std::nextafter(0.2, 0.0)), rt::IntensityLevel::kAbsent);
  EXPECT_EQ(rt::bin_intensity(std::nextafter(0.8, 0.0)), rt::IntensityLevel::kStrong);
}

TEST(Binning, RejectsOutOfRangeAndNan) {
  EXPECT_EQ(code_of([] { rt::bin_intensity(-1e-12); }), rt::ErrorCode::kRangeError);
  EXPECT_EQ(code_of([] { rt::bin_intensity(1.0 + 1e-12); }), rt::ErrorCode::kRangeError);
  EXPECT_EQ(code_of([] { rt::bin_intensity(std::numeric_limits<double>::quiet_NaN()); }),
            rt::ErrorCode::kRangeError);
  EXPECT_EQ(code_of([] { rt::bin_informativeness(2.0); }), rt::ErrorCode::kRangeError);
}

TEST(Binning, LabelsFollowThePresenceScale) {
  EXPECT_EQ(rt::display_label(rt::IntensityLevel::kAbsent), "Absent");
  EXPECT_EQ(rt::display_label(rt::IntensityLevel::kSubtle), "Subtle");
  EXPECT_EQ(rt::display_label(rt::IntensityLevel::kModerate), "Moderate");
  EXPECT_EQ(rt::display_label(rt::IntensityLevel::kStrong), "Strong");
  EXPECT_EQ(rt::display_label(rt::IntensityLevel::kVeryStrong), "Very Strong");
  EXPECT_EQ(rt::to_string(rt::IntensityLevel::kVeryStrong), "VeryStrong");
  EXPECT_EQ(rt::to_string(rt::bin_informativeness(0.0)), "Negligible");
  EXPECT_EQ(rt::to_string(rt::bin_informativeness(0.25)), "Minimal");
  EXPECT_EQ(rt::to_string(rt::bin_informativeness(0.5)), "Moderate");
  EXPECT_EQ(rt::to_string(rt::bin_informativeness(0.65)), "High");
  EXPECT_EQ(rt::to_string(rt::bin_informativeness(1.0)), "Extensive");
}

TEST(Binning, RangesContainTheirOwnValues) {
  Gen gen(7);
  for (int i = 0; i < 5000; ++i) {
    const double x = gen.intensity();
    const auto level = rt::bin_intensity(x);
    EXPECT_TRUE(rt::bin_range(level).contains(x)) << x;
    for (int other = 0; other < 5; ++other) {
      if (other == static_cast<int>(level)) continue;
      EXPECT_FALSE(rt::bin_range(static_cast<rt::IntensityLevel>(other)).contains(x)) << x;
    }
  }
  EXPECT_TRUE(rt::bin_range(rt::IntensityLevel::kVeryStrong).closed_hi);
  EXPECT_FALSE(rt::bin_range(rt::IntensityLevel::kStrong).closed_hi);
}

TEST(Inventory, ShippedInventoryHas215TraitsAnd16Styles) {
  const auto& inv = shipped_inventory();
  EXPECT_EQ(inv.personality_traits().size(), 215u);
  EXPECT_EQ(inv.writing_styles().size(), 16u);
  EXPECT_TRUE(inv.has_style("Factual"));
  EXPECT_TRUE(inv.has_style("Conversational"));
  EXPECT_TRUE(inv.has_style("Instructional"));
}

TEST(Inventory, LookupIsExactButCanonicalIsCaseInsensitive) {
  const auto& inv = shipped_inventory();
  EXPECT_TRUE(inv.has_trait("Caring"));
  EXPECT_FALSE(inv.has_trait("caring"));
  EXPECT_EQ(inv.canonical_trait("cARING").value_or(""), "Caring");
  EXPECT_FALSE(inv.canonical_style("Telepathic").has_value());
}

TEST(Inventory, GrammarAndUniqueness) {
  EXPECT_TRUE(rt::is_valid_attribute_name("Open-minded (trait_1)"));
  EXPECT_FALSE(rt::is_valid_attribute_name(""));
  EXPECT_FALSE(rt::is_valid_attribute_name("1st"));
  EXPECT_FALSE(rt::is_valid_attribute_name("Bad!"));
  EXPECT_EQ(code_of([] { rt::AttributeInventory({"Calm", "calm"}, {"Factual"}); }),
            rt::ErrorCode::kSchemaError);
  EXPECT_EQ(code_of([] { rt::AttributeInventory({}, {"Factual"}); }), rt::ErrorCode::kSchemaError);
  EXPECT_EQ(code_of([] { rt::AttributeInventory({"Calm"}, {"Factual"}, {}, {"Missing"}); }),
            rt::ErrorCode::kSchemaError);
  EXPECT_EQ(code_of([] { rt::AttributeInventory::from_json(nlohmann::json::array()); }),
            rt::ErrorCode::kSchemaError);
  EXPECT_EQ(code_of([] {
              rt::AttributeInventory::from_json({{"personality_traits", {"Calm"}}});
            }),
            rt::ErrorCode::kSchemaError);
}

TEST(Inventory, JsonRoundTripAndWithStyle) {
  const auto& inv = shipped_inventory();
  const auto back = rt::AttributeInventory::from_json(nlohmann::json::parse(inv.to_json().dump()));
  EXPECT_TRUE(back.same_attributes(inv));
  const auto grown = inv.with_style("Whimsical");
  EXPECT_EQ(grown.writing_styles().size(), 17u);
  EXPECT_TRUE(grown.has_style("Whimsical"));
  EXPECT_FALSE(grown.same_attributes(inv));
  EXPECT_THROW(inv.with_style("factual"), rt::Error);
}

TEST(Profile, ValidateRejectsUnknownNamesAndRanges) {
  const auto& inv = shipped_inventory();
  rt::ToneProfile p;
  p.personality["Caring"] = 0.7;
  p.writing_style["Factual"] = 0.3;
  p.structural.word_count = 12;
  EXPECT_NO_THROW(rt::validate_profile(p, inv));

  auto unknown = p;
  unknown.personality["Telepathic"] = 0.5;
  EXPECT_EQ(code_of([&] { rt::validate_profile(unknown, inv); }), rt::ErrorCode::kUnknownAttribute);

  auto high = p;
  high.writing_style["Factual"] = 1.5;
  EXPECT_EQ(code_of([&] { rt::validate_profile(high, inv); }), rt::ErrorCode::kRangeError);

  auto empty = p;
  empty.structural.word_count = 0;
  EXPECT_EQ(code_of([&] { rt::validate_profile(empty, inv); }), rt::ErrorCode::kRangeError);
  empty.role = rt::ProfileRole::kExtracted;
  EXPECT_NO_THROW(rt::validate_profile(empty, inv));
}

TEST(Profile, DominantAttributesUseFamilyThresholds) {
  rt::ToneProfile p;
  p.personality = {{"Caring", 0.4}, {"Calm", 0.39}, {"Brave", 0.9}, {"Cheerful", 0.4}};
  p.writing_style = {{"Factual", 0.2}, {"Narrative", 0.19}, {"Emotive", 0.6}};
  const auto d = rt::dominant_attributes(p);
  EXPECT_EQ(d.traits, (std::vector<std::string>{"Brave", "Caring", "Cheerful"}));
  EXPECT_EQ(d.styles, (std::vector<std::string>{"Emotive", "Factual"}));
}

TEST(Wire, RoundTripsGeneratedProfiles) {
  Gen gen(11);
  for (int i = 0; i < 500; ++i) {
    const auto p = gen.profile();
    const auto back = rt::profile_from_wire(nlohmann::json::parse(rt::to_wire(p).dump()));
    EXPECT_EQ(back, p);
  }
}

TEST(Wire, SerializedSpecIsSingleLine) {
  rt::ToneProfile p;
  p.personality["Caring"] = 0.8;
  p.structural.word_count = 20;
  p.structural.hashtags = true;
  const auto text = rt::serialize_spec(p);
  EXPECT_EQ(text.find('\n'), std::string::npos);
  EXPECT_NE(text.find("\"Personality\": {\"Caring\": 0.8}"), std::string::npos) << text;
  EXPECT_NE(text.find("\"Hashtags\": \"yes\""), std::string::npos) << text;
  EXPECT_EQ(rt::profile_from_wire(nlohmann::json::parse(text)), p);
}

TEST(Wire, RejectsMalformedDocuments) {
  rt::ToneProfile p;
  p.structural.word_count = 5;
  const auto good = nlohmann::json::parse(rt::to_wire(p).dump());

  auto extra = good;
  extra["Mood"] = 1;
  EXPECT_EQ(code_of([&] { rt::profile_from_wire(extra); }), rt::ErrorCode::kSchemaError);

  auto missing = good;
  missing.erase("word_count");
  EXPECT_EQ(code_of([&] { rt::profile_from_wire(missing); }), rt::ErrorCode::kSchemaError);

  auto fractional = good;
  fractional["word_count"] = 4.5;
  EXPECT_EQ(code_of([&] { rt::profile_from_wire(fractional); }), rt::ErrorCode::kSchemaError);

  auto maybe = good;
  maybe["Structural Attributes"]["Emojis"] = "maybe";
  EXPECT_EQ(code_of([&] { rt::profile_from_wire(maybe); }), rt::ErrorCode::kSchemaError);

  auto shouty = good;
  shouty["Structural Attributes"]["Emojis"] = "YES";
  EXPECT_TRUE(rt::profile_from_wire(shouty).structural.emojis);

  auto range = good;
  range["Informativeness"] = 1.2;
  EXPECT_EQ(code_of([&] { rt::profile_from_wire(range); }), rt::ErrorCode::kRangeError);

  auto seventh = good;
  seventh["Structural Attributes"]["Music"] = "no";
  EXPECT_EQ(code_of([&] { rt::profile_from_wire(seventh); }), rt::ErrorCode::kSchemaError);
}
