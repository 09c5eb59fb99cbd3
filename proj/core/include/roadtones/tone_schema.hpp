#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace roadtones {

// ---------------------------------------------------------------------------
// Intensity semantics
// ---------------------------------------------------------------------------

/// Five-level presence scale shared by personality traits and writing styles.
/// Bins are [0,0.2) [0.2,0.4) [0.4,0.6) [0.6,0.8) and the closed [0.8,1.0].
enum class IntensityLevel { kAbsent, kSubtle, kModerate, kStrong, kVeryStrong };

/// Informativeness uses the same edges with its own labels.
enum class InformativenessLevel { kNegligible, kMinimal, kModerate, kHigh, kExtensive };

struct BinRange {
  double lo;
  double hi;
  bool closed_hi;  // only the top bin includes its upper edge

  bool contains(double x) const noexcept { return x >= lo && (closed_hi ? x <= hi : x < hi); }
};

inline constexpr std::array<double, 6> kBinEdges{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};

/// Throws Error(kRangeError) when x is outside [0,1] or NaN.
IntensityLevel bin_intensity(double x);
InformativenessLevel bin_informativeness(double x);

BinRange bin_range(IntensityLevel level) noexcept;
BinRange bin_range(InformativenessLevel level) noexcept;

/// Identifier-style label: "Absent", "Subtle", "Moderate", "Strong", "VeryStrong".
std::string_view to_string(IntensityLevel level) noexcept;
/// Human label as used in prompts and the studio ("Very Strong").
std::string_view display_label(IntensityLevel level) noexcept;
std::string_view to_string(InformativenessLevel level) noexcept;

// ---------------------------------------------------------------------------
// Attribute inventory
// ---------------------------------------------------------------------------

/// The legal personality-trait and writing-style names. Immutable once built;
/// the constructor enforces name grammar, non-emptiness and case-insensitive
/// uniqueness within each list.
class AttributeInventory {
 public:
  AttributeInventory(std::vector<std::string> personality_traits,
                     std::vector<std::string> writing_styles,
                     std::filesystem::path source = {},
                     std::vector<std::string> placeholder_styles = {});

  /// Reads `{"personality_traits": [...], "writing_styles": [...]}`.
  static AttributeInventory load(const std::filesystem::path& path);
  static AttributeInventory from_json(const nlohmann::json& doc,
                                      std::filesystem::path source = {});
  nlohmann::ordered_json to_json() const;

  std::span<const std::string> personality_traits() const noexcept { return traits_; }
  std::span<const std::string> writing_styles() const noexcept { return styles_; }
  std::span<const std::string> placeholder_styles() const noexcept { return placeholders_; }
  const std::filesystem::path& source() const noexcept { return source_; }

  bool has_trait(std::string_view name) const;
  bool has_style(std::string_view name) const;

  /// Case-insensitive lookup returning the inventory's spelling.
  std::optional<std::string> canonical_trait(std::string_view name) const;
  std::optional<std::string> canonical_style(std::string_view name) const;

  /// Returns a copy with `style` appended (used when a proposal is approved).
  AttributeInventory with_style(std::string style) const;

  /// Same names in the same order.
  bool same_attributes(const AttributeInventory& other) const;

 private:
  std::vector<std::string> traits_;
  std::vector<std::string> styles_;
  std::vector<std::string> placeholders_;
  std::filesystem::path source_;
  std::map<std::string, std::size_t> trait_index_;  // lowercase name -> position
  std::map<std::string, std::size_t> style_index_;
};

/// Loads an inventory file; see AttributeInventory::load.
AttributeInventory load_inventory(const std::filesystem::path& path);

/// Name grammar `[A-Za-z][A-Za-z0-9 _\-()]*`.
bool is_valid_attribute_name(std::string_view name) noexcept;

// ---------------------------------------------------------------------------
// Tone profile
// ---------------------------------------------------------------------------

/// The six binary structural attributes scored by SAS.
enum class BinaryAttribute { kHashtags, kEmojis, kUserMentions, kLocation, kDateTime, kFirstPerson };

inline constexpr std::array<BinaryAttribute, 6> kBinaryAttributes{
    BinaryAttribute::kHashtags, BinaryAttribute::kEmojis,   BinaryAttribute::kUserMentions,
    BinaryAttribute::kLocation, BinaryAttribute::kDateTime, BinaryAttribute::kFirstPerson};

/// Snake-case key used in score reports ("user_mentions", "date_time", ...).
std::string_view attribute_key(BinaryAttribute attribute) noexcept;
/// Key used in the profile wire form ("User Mentions", "Date/Time", ...).
std::string_view wire_name(BinaryAttribute attribute) noexcept;

struct StructuralControls {
  double informativeness = 0.0;
  int word_count = 1;
  bool hashtags = false;
  bool emojis = false;
  bool user_mentions = false;
  bool location = false;
  bool date_time = false;
  bool first_person = false;  // false = external / third-person viewpoint

  bool get(BinaryAttribute attribute) const noexcept;
  void set(BinaryAttribute attribute, bool value) noexcept;

  friend bool operator==(const StructuralControls&, const StructuralControls&) = default;
};

using IntensityMap = std::map<std::string, double>;

enum class ProfileRole { kTarget, kExtracted };

std::string_view to_string(ProfileRole role) noexcept;

/// Full tone specification or measurement. Maps are sparse: a missing key
/// means intensity 0.
struct ToneProfile {
  IntensityMap personality;
  IntensityMap writing_style;
  StructuralControls structural;
  ProfileRole role = ProfileRole::kTarget;

  friend bool operator==(const ToneProfile&, const ToneProfile&) = default;
};

/// Throws Error(kUnknownAttribute) or Error(kRangeError) on the first
/// violated invariant. Targets need word_count >= 1; extracted profiles may
/// report 0 for an empty caption.
void validate_profile(const ToneProfile& profile, const AttributeInventory& inventory);

inline constexpr double kDominantTraitThreshold = 0.4;
inline constexpr double kDominantStyleThreshold = 0.2;

struct DominantAttributes {
  std::vector<std::string> traits;
  std::vector<std::string> styles;
};

/// Traits at >= 0.4 and styles at >= 0.2, by descending intensity then name.
DominantAttributes dominant_attributes(const ToneProfile& profile);

// ---------------------------------------------------------------------------
// Wire form
// ---------------------------------------------------------------------------

/// `{"Personality": {...}, "Writing Style": {...}, "Informativeness": x,
///   "Structural Attributes": {"User Mentions": "no", ...}, "word_count": n}`
nlohmann::ordered_json to_wire(const ToneProfile& profile);

/// Parses the wire form. "Personality" and "Writing Style" are optional
/// (absent = empty); everything else is required. Values are range-checked
/// but names are not checked against an inventory.
ToneProfile profile_from_wire(const nlohmann::json& wire, ProfileRole role = ProfileRole::kTarget);

/// Single-line rendering of the wire form with ", " and ": " separators, the
/// layout used inside prompts and instruction-tuning specs.
std::string serialize_spec(const ToneProfile& profile);
std::string serialize_json_inline(const nlohmann::ordered_json& value);

/// Wire-form map of one narrative family, e.g. `{"Anxious": 0.8}`.
nlohmann::ordered_json intensity_map_json(const IntensityMap& map);

}  // namespace roadtones
