#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadtones/dataset.hpp"

namespace roadtones {

/// Instruction-side text assets.
struct InstructionSet {
  std::vector<std::string> tone_templates;
  std::vector<std::string> summary_templates;
  std::string binding_rules;  // contains the literal "{0}"
  std::string cot_instruction;

  /// Reads tone_templates.txt, summary_templates.txt, binding_rules.txt and
  /// cot_instruction.txt from `directory`. Throws Error(kSchemaError) for an
  /// empty template list or binding rules without "{0}".
  static InstructionSet load(const std::filesystem::path& directory);
};

struct SftTriplet {
  std::string instruction;
  std::string target;
  bool is_cot = false;
  std::string video_id;
};

nlohmann::ordered_json to_json(const SftTriplet& triplet);

struct SftOptions {
  double cot_fraction = 0.25;
  std::uint64_t seed = 0;
  /// Also emit one plain summarization triplet per video.
  bool summary_triplets = true;
};

/// True when triplet `index` carries a CoT target: the rounded running count
/// floor(i*f + 1/2) steps up between i and i+1. Over N triplets this yields
/// exactly floor(N*f + 1/2) CoT targets, evenly spread.
bool is_cot_index(std::size_t index, double cot_fraction);

/// `binding_rules` with "{0}" replaced by serialize_spec(profile).
std::string render_binding_rules(const InstructionSet& set, const ToneProfile& profile);

/// [FINAL] caption [/FINAL] followed by the four-part [REASONING] block.
std::string render_cot_target(const DatasetRecord& record);

struct CotParts {
  std::string final_caption;
  std::string reasoning;
};

/// Parses `[FINAL]...[/FINAL][REASONING]...[/REASONING]` (whitespace allowed
/// around the blocks, contents trimmed). Returns nullopt on any deviation.
std::optional<CotParts> parse_cot_target(std::string_view text);

/// One tone triplet per record in input order, then (optionally) one
/// summarization triplet per video in ascending id order. Throws
/// Error(kMissingProvenance) for a record lacking a stage-1 or stage-2
/// caption and Error(kPreconditionFailed) for a fraction outside [0,1].
std::vector<SftTriplet> export_sft(const std::vector<DatasetRecord>& records, const InstructionSet& set,
                                   const SftOptions& options = {});

}  // namespace roadtones
