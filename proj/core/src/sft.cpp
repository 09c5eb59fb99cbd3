#include "roadtones/sft.hpp"

#include <cmath>
#include <map>
#include <random>
#include <regex>

#include "roadtones/error.hpp"
#include "roadtones/text_util.hpp"

namespace roadtones {
namespace {

constexpr std::string_view kComponent = "dataset";
constexpr std::string_view kPlaceholder = "{0}";

}  // namespace

InstructionSet InstructionSet::load(const std::filesystem::path& directory) {
  InstructionSet set;
  set.tone_templates = read_nonempty_lines(directory / "tone_templates.txt");
  set.summary_templates = read_nonempty_lines(directory / "summary_templates.txt");
  set.binding_rules = std::string(trim(read_text_file(directory / "binding_rules.txt")));
  set.cot_instruction = std::string(trim(read_text_file(directory / "cot_instruction.txt")));
  if (set.tone_templates.empty() || set.summary_templates.empty()) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                "instruction template lists in " + directory.string() + " must not be empty");
  }
  if (set.binding_rules.find(kPlaceholder) == std::string::npos) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent), "binding rules lack the {0} placeholder");
  }
  return set;
}

nlohmann::ordered_json to_json(const SftTriplet& t) {
  nlohmann::ordered_json doc;
  doc["instruction"] = t.instruction;
  doc["target"] = t.target;
  doc["is_cot"] = t.is_cot;
  doc["video_id"] = t.video_id;
  return doc;
}

bool is_cot_index(std::size_t index, double cot_fraction) {
  const auto i = static_cast<double>(index);
  return std::floor((i + 1.0) * cot_fraction + 0.5) > std::floor(i * cot_fraction + 0.5);
}

std::string render_binding_rules(const InstructionSet& set, const ToneProfile& profile) {
  std::string out = set.binding_rules;
  out.replace(out.find(kPlaceholder), kPlaceholder.size(), serialize_spec(profile));
  return out;
}

std::string render_cot_target(const DatasetRecord& record) {
  const auto stage1 = record.stage_caption(1);
  const auto stage2 = record.stage_caption(2);
  if (!stage1 || !stage2) {
    throw Error(ErrorCode::kMissingProvenance, std::string(kComponent),
                "record " + record.video_id + "#" + std::to_string(record.variant) + " lacks a stage-" +
                    (stage1 ? "2" : "1") + " caption");
  }
  const char* chosen = record.final_stage == 1 ? "second" : "third";
  std::string out;
  out += "[FINAL]\n" + record.final_caption + "\n[/FINAL]\n";
  out += "[REASONING]\n";
  out += "1) Key Event summary: " + record.summary + "\n";
  out += "2) Caption with Writing style and structure applied (informativeness, word_count, binary toggles): " +
         *stage1 + "\n";
  out += "3) Caption with Personality traits refined (preserving writing style and structural controls): " +
         *stage2 + "\n";
  out += std::string("Selection: The ") + chosen +
         " step candidate best satisfies the provided personality, writing style and structural controls; "
         "returning it as final.\n";
  out += "[/REASONING]";
  return out;
}

std::optional<CotParts> parse_cot_target(std::string_view text) {
  static const std::regex grammar(
      R"(^\s*\[FINAL\]([\s\S]*?)\[/FINAL\]\s*\[REASONING\]([\s\S]*?)\[/REASONING\]\s*$)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(text.begin(), text.end(), m, grammar)) return std::nullopt;
  CotParts parts{std::string(trim(m[1].str())), std::string(trim(m[2].str()))};
  for (const auto* body : {&parts.final_caption, &parts.reasoning}) {
    for (const char* tag : {"[FINAL]", "[/FINAL]", "[REASONING]", "[/REASONING]"}) {
      if (body->find(tag) != std::string::npos) return std::nullopt;
    }
  }
  return parts;
}

std::vector<SftTriplet> export_sft(const std::vector<DatasetRecord>& records, const InstructionSet& set,
                                   const SftOptions& options) {
  if (!(options.cot_fraction >= 0.0 && options.cot_fraction <= 1.0)) {
    throw Error(ErrorCode::kPreconditionFailed, std::string(kComponent), "cot_fraction must be in [0,1]");
  }
  for (const auto& r : records) {
    if (!r.stage_caption(1) || !r.stage_caption(2)) {
      throw Error(ErrorCode::kMissingProvenance, std::string(kComponent),
                  "record " + r.video_id + "#" + std::to_string(r.variant) +
                      " lacks stage provenance (needs both stage captions)");
    }
  }

  std::mt19937_64 rng(options.seed);
  std::vector<SftTriplet> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    SftTriplet t;
    t.video_id = r.video_id;
    t.is_cot = is_cot_index(i, options.cot_fraction);
    t.instruction = set.tone_templates[draw_below(rng, set.tone_templates.size())] + " " +
                    render_binding_rules(set, r.profile);
    if (t.is_cot) {
      t.instruction += "\n\n" + set.cot_instruction;
      t.target = render_cot_target(r);
    } else {
      t.target = r.final_caption;
    }
    out.push_back(std::move(t));
  }

  if (options.summary_triplets) {
    std::map<std::string, std::string> summaries;
    for (const auto& r : records) summaries.emplace(r.video_id, r.summary);
    for (const auto& [id, summary] : summaries) {
      out.push_back({set.summary_templates[draw_below(rng, set.summary_templates.size())], summary, false, id});
    }
  }
  return out;
}

}  // namespace roadtones
