#include "roadtones/extraction.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "roadtones/error.hpp"
#include "roadtones/structured_call.hpp"
#include "roadtones/text_util.hpp"

namespace roadtones {
namespace {

constexpr std::string_view kComponent = "extraction";

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& message, const std::string& detail) {
  throw Error(ErrorCode::kParseError, std::string(kComponent), message, detail);
}

void require_nonempty(std::string_view text, const char* what) {
  if (trim(text).empty()) {
    throw Error(ErrorCode::kPreconditionFailed, std::string(kComponent),
                std::string(what) + " must not be empty");
  }
}

std::string names_json(std::span<const std::string> names) {
  return json(std::vector<std::string>(names.begin(), names.end())).dump();
}

bool parse_yes_no(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_string()) {
    parse_fail(std::string("structural reply lacks a yes/no value for \"") + key + "\"", "schema");
  }
  const auto value = doc.at(key).get<std::string>();
  if (iequals(value, "yes")) return true;
  if (iequals(value, "no")) return false;
  parse_fail(std::string("\"") + key + "\" must be \"yes\" or \"no\", got \"" + value + "\"", "schema");
}

template <typename Fn>
auto at_step(int step, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (Error& e) {
    e.with_step(step);
    throw;
  }
}

}  // namespace

void ExtractionConfig::validate() const {
  if (!(temperature >= 0.0)) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent), "temperature must be >= 0",
                "temperature");
  }
  if (!(proposal_threshold >= 0.0 && proposal_threshold <= 1.0)) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                "proposal_threshold must be in [0,1]", "proposal_threshold");
  }
}

std::string render_name_list(std::span<const std::string> names) {
  std::string out;
  for (const auto& n : names) {
    out += "- ";
    out += n;
    out += '\n';
  }
  if (!out.empty()) out.pop_back();
  return out;
}

ToneExtractor::ToneExtractor(const AttributeInventory& inventory, const PromptLibrary& prompts,
                             ChatProvider& provider, ExtractionConfig config)
    : inventory_(inventory), prompts_(prompts), provider_(provider), config_(std::move(config)) {
  config_.validate();
}

ChatRequest ToneExtractor::make_request(std::string_view prompt, std::string_view task,
                                        const TemplateVars& vars,
                                        std::map<std::string, std::string> context) const {
  const auto& tpl = prompts_.get(prompt);
  ChatRequest request;
  request.model = config_.model;
  if (const auto system = tpl.render_system(vars); !system.empty()) {
    request.messages.push_back({"system", system});
  }
  request.messages.push_back({"user", tpl.render_user(vars)});
  request.temperature = config_.temperature;
  request.top_p = config_.top_p;
  request.max_tokens = config_.max_tokens;
  request.response_format = ResponseFormat::kJson;
  request.task = std::string(task);
  request.context = std::move(context);
  return request;
}

IntensityMap ToneExtractor::extract_writing_style(std::string_view caption,
                                                  std::string_view summary) const {
  require_nonempty(caption, "caption");
  const auto styles = inventory_.writing_styles();
  const TemplateVars vars{{"caption", std::string(caption)},
                          {"summary", std::string(summary)},
                          {"inventory", render_name_list(styles)}};
  auto request = make_request("extract_writing_style", tasks::kExtractWritingStyle, vars,
                              {{"caption", std::string(caption)},
                               {"summary", std::string(summary)},
                               {"names", names_json(styles)}});
  IntensityMap out;
  call_structured(
      provider_, std::move(request),
      [&](const json& doc) {
        IntensityMap parsed;
        for (const auto& name : styles) parsed[name] = 0.0;
        std::set<std::string> seen;
        for (const auto& [key, value] : doc.items()) {
          const auto canonical = inventory_.canonical_style(key);
          if (!canonical) parse_fail("unknown writing style \"" + key + "\"", "UnknownAttribute");
          if (!seen.insert(*canonical).second) parse_fail("style \"" + key + "\" listed twice", "duplicate");
          parsed[*canonical] = require_unit_interval(value, key, kComponent);
        }
        out = std::move(parsed);
      },
      kComponent);
  return out;
}

IntensityMap ToneExtractor::extract_personality(std::string_view caption,
                                                std::string_view summary) const {
  require_nonempty(caption, "caption");
  const auto traits = inventory_.personality_traits();
  const TemplateVars vars{{"caption", std::string(caption)},
                          {"summary", std::string(summary)},
                          {"inventory", render_name_list(traits)}};
  auto request = make_request("extract_personality", tasks::kExtractPersonality, vars,
                              {{"caption", std::string(caption)},
                               {"summary", std::string(summary)},
                               {"names", names_json(traits)}});
  IntensityMap out;
  call_structured(
      provider_, std::move(request),
      [&](const json& doc) {
        IntensityMap parsed;
        for (const auto& [key, value] : doc.items()) {
          const auto canonical = inventory_.canonical_trait(key);
          if (!canonical) parse_fail("unknown personality trait \"" + key + "\"", "UnknownAttribute");
          if (parsed.contains(*canonical)) parse_fail("trait \"" + key + "\" listed twice", "duplicate");
          parsed[*canonical] = require_unit_interval(value, key, kComponent);
        }
        out = std::move(parsed);
      },
      kComponent);
  return out;
}

double ToneExtractor::extract_informativeness(std::string_view caption,
                                              std::string_view summary) const {
  require_nonempty(caption, "caption");
  require_nonempty(summary, "summary");
  const TemplateVars vars{{"caption", std::string(caption)},
                          {"summary", std::string(summary)},
                          {"inventory", ""}};
  auto request = make_request("extract_informativeness", tasks::kExtractInformativeness, vars,
                              {{"caption", std::string(caption)}, {"summary", std::string(summary)}});
  double out = 0.0;
  call_structured(
      provider_, std::move(request),
      [&](const json& doc) {
        if (!doc.contains("informativeness")) parse_fail("reply lacks \"informativeness\"", "schema");
        out = require_unit_interval(doc.at("informativeness"), "informativeness", kComponent);
      },
      kComponent);
  return out;
}

StructuralFlags ToneExtractor::extract_structural_flags(std::string_view caption) const {
  const TemplateVars vars{{"caption", std::string(caption)}, {"summary", ""}, {"inventory", ""}};
  auto request = make_request("extract_structural", tasks::kExtractStructural, vars,
                              {{"caption", std::string(caption)}});
  StructuralFlags out;
  call_structured(
      provider_, std::move(request),
      [&](const json& doc) {
        StructuralFlags parsed;
        parsed.location = parse_yes_no(doc, "Location");
        parsed.date_time = parse_yes_no(doc, "Date/Time");
        parsed.first_person = parse_yes_no(doc, "First-Person Perspective");
        out = parsed;
      },
      kComponent);
  return out;
}

ToneProfile ToneExtractor::extract_tone_profile(std::string_view caption,
                                                std::string_view summary) const {
  ToneProfile profile;
  profile.role = ProfileRole::kExtracted;
  profile.writing_style = at_step(1, [&] { return extract_writing_style(caption, summary); });
  profile.personality = at_step(2, [&] { return extract_personality(caption, summary); });
  profile.structural.informativeness = at_step(3, [&] { return extract_informativeness(caption, summary); });
  const auto flags = at_step(4, [&] { return extract_structural_flags(caption); });

  const auto surface = extract_surface(caption);
  auto& s = profile.structural;
  s.location = flags.location;
  s.date_time = flags.date_time;
  s.first_person = flags.first_person;
  s.hashtags = !surface.hashtags.empty();
  s.emojis = !surface.emojis.empty();
  s.user_mentions = !surface.mentions.empty();
  s.word_count = surface.word_count;
  validate_profile(profile, inventory_);
  return profile;
}

StyleProposal ToneExtractor::propose_style_candidate(std::string_view caption, std::string_view summary,
                                                     const IntensityMap& extracted_styles,
                                                     std::string caption_id) const {
  for (const auto& [name, value] : extracted_styles) {
    if (value >= config_.proposal_threshold) {
      throw Error(ErrorCode::kPreconditionFailed, std::string(kComponent),
                  "style \"" + name + "\" scores " + format_double(value) + ", not below the threshold " +
                      format_double(config_.proposal_threshold));
    }
  }
  const auto styles = inventory_.writing_styles();
  const TemplateVars vars{{"caption", std::string(caption)},
                          {"summary", std::string(summary)},
                          {"inventory", render_name_list(styles)}};
  auto request = make_request("propose_style", tasks::kProposeStyle, vars,
                              {{"caption", std::string(caption)},
                               {"summary", std::string(summary)},
                               {"names", names_json(styles)}});
  StyleProposal proposal;
  proposal.caption_id = std::move(caption_id);
  call_structured(
      provider_, std::move(request),
      [&](const json& doc) {
        if (!doc.contains("proposed_style") || !doc.at("proposed_style").is_string()) {
          parse_fail("reply lacks \"proposed_style\"", "schema");
        }
        const auto name = std::string(trim(doc.at("proposed_style").get<std::string>()));
        if (!is_valid_attribute_name(name)) parse_fail("\"" + name + "\" is not a valid style name", "schema");
        proposal.proposed_style = name;
        proposal.rationale = doc.contains("rationale") && doc.at("rationale").is_string()
                                 ? doc.at("rationale").get<std::string>()
                                 : std::string();
      },
      kComponent);
  if (inventory_.canonical_style(proposal.proposed_style)) {
    throw Error(ErrorCode::kDuplicateProposal, std::string(kComponent),
                "proposed style \"" + proposal.proposed_style + "\" already exists");
  }
  return proposal;
}

}  // namespace roadtones
