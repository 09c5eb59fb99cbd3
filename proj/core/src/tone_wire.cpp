#include <cmath>

#include "roadtones/error.hpp"
#include "roadtones/text_util.hpp"
#include "roadtones/tone_schema.hpp"

namespace roadtones {
namespace {

constexpr std::string_view kComponent = "tone-schema";
constexpr const char* kPersonalityKey = "Personality";
constexpr const char* kStyleKey = "Writing Style";
constexpr const char* kInformativenessKey = "Informativeness";
constexpr const char* kStructuralKey = "Structural Attributes";
constexpr const char* kWordCountKey = "word_count";

// Order used by the instruction-tuning sample spec.
constexpr std::array<BinaryAttribute, 6> kWireOrder{
    BinaryAttribute::kUserMentions, BinaryAttribute::kHashtags, BinaryAttribute::kEmojis,
    BinaryAttribute::kDateTime,     BinaryAttribute::kLocation, BinaryAttribute::kFirstPerson};

[[noreturn]] void schema_error(const std::string& message, std::string detail = {}) {
  throw Error(ErrorCode::kSchemaError, std::string(kComponent), message, std::move(detail));
}

double unit_interval(const nlohmann::json& value, const std::string& what) {
  if (!value.is_number()) schema_error(what + " must be a number", what);
  const double x = value.get<double>();
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::kRangeError, std::string(kComponent),
                what + " " + format_double(x) + " is outside [0,1]", what);
  }
  return x;
}

IntensityMap parse_map(const nlohmann::json& wire, const char* key) {
  IntensityMap map;
  if (!wire.contains(key)) return map;
  const auto& section = wire.at(key);
  if (!section.is_object()) schema_error(std::string("'") + key + "' must be an object", key);
  for (const auto& [name, value] : section.items()) {
    map.emplace(name, unit_interval(value, std::string(key) + "." + name));
  }
  return map;
}

bool parse_yes_no(const nlohmann::json& value, std::string_view name) {
  if (value.is_string()) {
    const auto text = value.get<std::string>();
    if (iequals(text, "yes")) return true;
    if (iequals(text, "no")) return false;
  }
  schema_error("structural attribute '" + std::string(name) + "' must be \"yes\" or \"no\"",
               std::string(name));
}

}  // namespace

nlohmann::ordered_json intensity_map_json(const IntensityMap& map) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [name, value] : map) out[name] = value;
  return out;
}

nlohmann::ordered_json to_wire(const ToneProfile& profile) {
  nlohmann::ordered_json wire;
  wire[kPersonalityKey] = intensity_map_json(profile.personality);
  wire[kStyleKey] = intensity_map_json(profile.writing_style);
  wire[kInformativenessKey] = profile.structural.informativeness;
  nlohmann::ordered_json attributes = nlohmann::ordered_json::object();
  for (auto attribute : kWireOrder) {
    attributes[std::string(wire_name(attribute))] =
        profile.structural.get(attribute) ? "yes" : "no";
  }
  wire[kStructuralKey] = std::move(attributes);
  wire[kWordCountKey] = profile.structural.word_count;
  return wire;
}

ToneProfile profile_from_wire(const nlohmann::json& wire, ProfileRole role) {
  if (!wire.is_object()) schema_error("tone profile must be a JSON object");
  for (const auto& [key, value] : wire.items()) {
    if (key != kPersonalityKey && key != kStyleKey && key != kInformativenessKey &&
        key != kStructuralKey && key != kWordCountKey) {
      schema_error("unexpected key '" + key + "' in tone profile", key);
    }
  }
  ToneProfile profile;
  profile.role = role;
  profile.personality = parse_map(wire, kPersonalityKey);
  profile.writing_style = parse_map(wire, kStyleKey);

  if (!wire.contains(kInformativenessKey)) schema_error("missing 'Informativeness'", kInformativenessKey);
  profile.structural.informativeness = unit_interval(wire.at(kInformativenessKey), kInformativenessKey);

  if (!wire.contains(kWordCountKey)) schema_error("missing 'word_count'", kWordCountKey);
  const auto& wc = wire.at(kWordCountKey);
  if (!wc.is_number_integer() && !(wc.is_number_float() && std::floor(wc.get<double>()) == wc.get<double>())) {
    schema_error("'word_count' must be an integer", kWordCountKey);
  }
  const auto count = wc.get<double>();
  if (count < 0 || count > 100000) {
    throw Error(ErrorCode::kRangeError, std::string(kComponent),
                "word_count " + format_double(count) + " is out of range", kWordCountKey);
  }
  profile.structural.word_count = static_cast<int>(count);

  if (!wire.contains(kStructuralKey)) schema_error("missing 'Structural Attributes'", kStructuralKey);
  const auto& attributes = wire.at(kStructuralKey);
  if (!attributes.is_object()) schema_error("'Structural Attributes' must be an object", kStructuralKey);
  for (auto attribute : kBinaryAttributes) {
    const std::string name(wire_name(attribute));
    if (!attributes.contains(name)) schema_error("missing structural attribute '" + name + "'", name);
    profile.structural.set(attribute, parse_yes_no(attributes.at(name), name));
  }
  if (attributes.size() != kBinaryAttributes.size()) {
    schema_error("'Structural Attributes' must contain exactly the six binary attributes",
                 kStructuralKey);
  }
  return profile;
}

std::string serialize_json_inline(const nlohmann::ordered_json& value) {
  if (value.is_object()) {
    std::string out = "{";
    bool first = true;
    for (const auto& [key, item] : value.items()) {
      if (!first) out += ", ";
      first = false;
      out += nlohmann::json(key).dump();
      out += ": ";
      out += serialize_json_inline(item);
    }
    return out + "}";
  }
  if (value.is_array()) {
    std::string out = "[";
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (i != 0) out += ", ";
      out += serialize_json_inline(value[i]);
    }
    return out + "]";
  }
  return value.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

std::string serialize_spec(const ToneProfile& profile) {
  return serialize_json_inline(to_wire(profile));
}

}  // namespace roadtones
