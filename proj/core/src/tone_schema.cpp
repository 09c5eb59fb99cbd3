#include "roadtones/tone_schema.hpp"

#include <algorithm>
#include <cmath>

#include "roadtones/error.hpp"
#include "roadtones/text_util.hpp"

namespace roadtones {
namespace {

constexpr std::string_view kComponent = "tone-schema";

std::size_t bin_index(double x, std::string_view what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::kRangeError, std::string(kComponent),
                std::string(what) + " " + format_double(x) + " is outside [0,1]", "range");
  }
  for (std::size_t i = 1; i < kBinEdges.size() - 1; ++i) {
    if (x < kBinEdges[i]) return i - 1;
  }
  return kBinEdges.size() - 2;
}

BinRange range_for_index(std::size_t i) noexcept {
  return BinRange{kBinEdges[i], kBinEdges[i + 1], i + 2 == kBinEdges.size()};
}

std::map<std::string, std::size_t> build_index(const std::vector<std::string>& names,
                                               std::string_view list_name) {
  if (names.empty()) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                std::string(list_name) + " must not be empty", std::string(list_name));
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!is_valid_attribute_name(names[i])) {
      throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                  "malformed attribute name '" + names[i] + "' in " + std::string(list_name),
                  names[i]);
    }
    auto [it, inserted] = index.emplace(to_lower_ascii(names[i]), i);
    if (!inserted) {
      throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                  "duplicate attribute name '" + names[i] + "' in " + std::string(list_name) +
                      " (case-insensitive match with '" + names[it->second] + "')",
                  names[i]);
    }
  }
  return index;
}

std::optional<std::string> lookup(const std::map<std::string, std::size_t>& index,
                                  const std::vector<std::string>& names, std::string_view name) {
  auto it = index.find(to_lower_ascii(name));
  if (it == index.end()) return std::nullopt;
  return names[it->second];
}

std::vector<std::string> string_list(const nlohmann::json& doc, const char* key, bool required) {
  if (!doc.contains(key)) {
    if (!required) return {};
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                std::string("inventory is missing '") + key + "'", key);
  }
  const auto& list = doc.at(key);
  if (!list.is_array()) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                std::string("'") + key + "' must be an array of strings", key);
  }
  std::vector<std::string> out;
  out.reserve(list.size());
  for (const auto& item : list) {
    if (!item.is_string()) {
      throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                  std::string("'") + key + "' must contain only strings", key);
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

void check_intensities(const IntensityMap& map, std::string_view family,
                       bool (AttributeInventory::*known)(std::string_view) const,
                       const AttributeInventory& inventory) {
  for (const auto& [name, value] : map) {
    if (!(inventory.*known)(name)) {
      throw Error(ErrorCode::kUnknownAttribute, std::string(kComponent),
                  "unknown " + std::string(family) + " attribute '" + name + "'", name);
    }
    if (!(value >= 0.0 && value <= 1.0)) {
      throw Error(ErrorCode::kRangeError, std::string(kComponent),
                  std::string(family) + " intensity for '" + name + "' is " + format_double(value) +
                      ", outside [0,1]",
                  name);
    }
  }
}

std::vector<std::string> ranked_above(const IntensityMap& map, double threshold) {
  std::vector<std::pair<std::string, double>> picked;
  for (const auto& [name, value] : map) {
    if (value >= threshold) picked.emplace_back(name, value);
  }
  std::sort(picked.begin(), picked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> names;
  names.reserve(picked.size());
  for (auto& [name, value] : picked) names.push_back(std::move(name));
  return names;
}

}  // namespace

IntensityLevel bin_intensity(double x) {
  return static_cast<IntensityLevel>(bin_index(x, "intensity"));
}

InformativenessLevel bin_informativeness(double x) {
  return static_cast<InformativenessLevel>(bin_index(x, "informativeness"));
}

BinRange bin_range(IntensityLevel level) noexcept {
  return range_for_index(static_cast<std::size_t>(level));
}

BinRange bin_range(InformativenessLevel level) noexcept {
  return range_for_index(static_cast<std::size_t>(level));
}

std::string_view to_string(IntensityLevel level) noexcept {
  switch (level) {
    case IntensityLevel::kAbsent: return "Absent";
    case IntensityLevel::kSubtle: return "Subtle";
    case IntensityLevel::kModerate: return "Moderate";
    case IntensityLevel::kStrong: return "Strong";
    case IntensityLevel::kVeryStrong: return "VeryStrong";
  }
  return "Absent";
}

std::string_view display_label(IntensityLevel level) noexcept {
  return level == IntensityLevel::kVeryStrong ? "Very Strong" : to_string(level);
}

std::string_view to_string(InformativenessLevel level) noexcept {
  switch (level) {
    case InformativenessLevel::kNegligible: return "Negligible";
    case InformativenessLevel::kMinimal: return "Minimal";
    case InformativenessLevel::kModerate: return "Moderate";
    case InformativenessLevel::kHigh: return "High";
    case InformativenessLevel::kExtensive: return "Extensive";
  }
  return "Negligible";
}

bool is_valid_attribute_name(std::string_view name) noexcept {
  if (name.empty()) return false;
  const auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
  if (!alpha(name.front())) return false;
  return std::all_of(name.begin() + 1, name.end(), [&](char c) {
    return alpha(c) || (c >= '0' && c <= '9') || c == ' ' || c == '_' || c == '-' || c == '(' ||
           c == ')';
  });
}

AttributeInventory::AttributeInventory(std::vector<std::string> personality_traits,
                                       std::vector<std::string> writing_styles,
                                       std::filesystem::path source,
                                       std::vector<std::string> placeholder_styles)
    : traits_(std::move(personality_traits)),
      styles_(std::move(writing_styles)),
      placeholders_(std::move(placeholder_styles)),
      source_(std::move(source)),
      trait_index_(build_index(traits_, "personality_traits")),
      style_index_(build_index(styles_, "writing_styles")) {
  for (const auto& name : placeholders_) {
    if (!has_style(name)) {
      throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                  "placeholder style '" + name + "' is not listed in writing_styles", name);
    }
  }
}

AttributeInventory AttributeInventory::load(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                path.string() + ": invalid JSON: " + e.what(), "json");
  }
  return from_json(doc, path);
}

AttributeInventory AttributeInventory::from_json(const nlohmann::json& doc,
                                                 std::filesystem::path source) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                "inventory must be a JSON object", "json");
  }
  return AttributeInventory(string_list(doc, "personality_traits", true),
                            string_list(doc, "writing_styles", true), std::move(source),
                            string_list(doc, "placeholder_styles", false));
}

nlohmann::ordered_json AttributeInventory::to_json() const {
  nlohmann::ordered_json doc;
  doc["personality_traits"] = traits_;
  doc["writing_styles"] = styles_;
  if (!placeholders_.empty()) doc["placeholder_styles"] = placeholders_;
  return doc;
}

bool AttributeInventory::has_trait(std::string_view name) const {
  auto it = trait_index_.find(to_lower_ascii(name));
  return it != trait_index_.end() && traits_[it->second] == name;
}

bool AttributeInventory::has_style(std::string_view name) const {
  auto it = style_index_.find(to_lower_ascii(name));
  return it != style_index_.end() && styles_[it->second] == name;
}

std::optional<std::string> AttributeInventory::canonical_trait(std::string_view name) const {
  return lookup(trait_index_, traits_, name);
}

std::optional<std::string> AttributeInventory::canonical_style(std::string_view name) const {
  return lookup(style_index_, styles_, name);
}

AttributeInventory AttributeInventory::with_style(std::string style) const {
  auto styles = styles_;
  styles.push_back(std::move(style));
  return AttributeInventory(traits_, std::move(styles), source_, placeholders_);
}

bool AttributeInventory::same_attributes(const AttributeInventory& other) const {
  return traits_ == other.traits_ && styles_ == other.styles_;
}

AttributeInventory load_inventory(const std::filesystem::path& path) {
  return AttributeInventory::load(path);
}

std::string_view attribute_key(BinaryAttribute attribute) noexcept {
  switch (attribute) {
    case BinaryAttribute::kHashtags: return "hashtags";
    case BinaryAttribute::kEmojis: return "emojis";
    case BinaryAttribute::kUserMentions: return "user_mentions";
    case BinaryAttribute::kLocation: return "location";
    case BinaryAttribute::kDateTime: return "date_time";
    case BinaryAttribute::kFirstPerson: return "first_person";
  }
  return "";
}

std::string_view wire_name(BinaryAttribute attribute) noexcept {
  switch (attribute) {
    case BinaryAttribute::kHashtags: return "Hashtags";
    case BinaryAttribute::kEmojis: return "Emojis";
    case BinaryAttribute::kUserMentions: return "User Mentions";
    case BinaryAttribute::kLocation: return "Location";
    case BinaryAttribute::kDateTime: return "Date/Time";
    case BinaryAttribute::kFirstPerson: return "First-Person Perspective";
  }
  return "";
}

bool StructuralControls::get(BinaryAttribute attribute) const noexcept {
  switch (attribute) {
    case BinaryAttribute::kHashtags: return hashtags;
    case BinaryAttribute::kEmojis: return emojis;
    case BinaryAttribute::kUserMentions: return user_mentions;
    case BinaryAttribute::kLocation: return location;
    case BinaryAttribute::kDateTime: return date_time;
    case BinaryAttribute::kFirstPerson: return first_person;
  }
  return false;
}

void StructuralControls::set(BinaryAttribute attribute, bool value) noexcept {
  switch (attribute) {
    case BinaryAttribute::kHashtags: hashtags = value; break;
    case BinaryAttribute::kEmojis: emojis = value; break;
    case BinaryAttribute::kUserMentions: user_mentions = value; break;
    case BinaryAttribute::kLocation: location = value; break;
    case BinaryAttribute::kDateTime: date_time = value; break;
    case BinaryAttribute::kFirstPerson: first_person = value; break;
  }
}

std::string_view to_string(ProfileRole role) noexcept {
  return role == ProfileRole::kTarget ? "target" : "extracted";
}

void validate_profile(const ToneProfile& profile, const AttributeInventory& inventory) {
  check_intensities(profile.personality, "personality", &AttributeInventory::has_trait, inventory);
  check_intensities(profile.writing_style, "writing style", &AttributeInventory::has_style,
                    inventory);
  const auto& s = profile.structural;
  if (!(s.informativeness >= 0.0 && s.informativeness <= 1.0)) {
    throw Error(ErrorCode::kRangeError, std::string(kComponent),
                "informativeness " + format_double(s.informativeness) + " is outside [0,1]",
                "informativeness");
  }
  const int min_words = profile.role == ProfileRole::kTarget ? 1 : 0;
  if (s.word_count < min_words) {
    throw Error(ErrorCode::kRangeError, std::string(kComponent),
                "word_count " + std::to_string(s.word_count) + " must be >= " +
                    std::to_string(min_words),
                "word_count");
  }
}

DominantAttributes dominant_attributes(const ToneProfile& profile) {
  return DominantAttributes{ranked_above(profile.personality, kDominantTraitThreshold),
                            ranked_above(profile.writing_style, kDominantStyleThreshold)};
}

}  // namespace roadtones
