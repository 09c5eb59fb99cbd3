#pragma once

#include <string>
#include <string_view>

#include "roadtones/provider.hpp"
#include "roadtones/surface.hpp"
#include "roadtones/templates.hpp"
#include "roadtones/tone_schema.hpp"

namespace roadtones {

struct ExtractionConfig {
  std::string model = "gpt-4.1-mini";
  double temperature = 0.4;
  double top_p = 1.0;
  int max_tokens = 1024;
  /// Style proposals are allowed only when every style scores below this.
  double proposal_threshold = 0.2;

  /// Throws Error(kSchemaError) for a negative temperature or a threshold
  /// outside [0,1].
  void validate() const;
};

struct StructuralFlags {
  bool location = false;
  bool date_time = false;
  bool first_person = false;

  friend bool operator==(const StructuralFlags&, const StructuralFlags&) = default;
};

struct StyleProposal {
  std::string caption_id;
  std::string proposed_style;
  std::string rationale;
  std::string status = "pending";  // pending | approved | rejected
};

/// The four-step tone extractor: writing style, personality,
/// informativeness, structural flags, plus deterministic surface features.
///
/// Holds references; the inventory, prompts and provider must outlive it.
/// Const methods are safe to call concurrently when the provider is.
class ToneExtractor {
 public:
  ToneExtractor(const AttributeInventory& inventory, const PromptLibrary& prompts,
                ChatProvider& provider, ExtractionConfig config = {});

  /// Step 1. Scores every inventory style; unlisted styles are zero-filled.
  IntensityMap extract_writing_style(std::string_view caption, std::string_view summary) const;
  /// Step 2. Sparse map of shortlisted traits.
  IntensityMap extract_personality(std::string_view caption, std::string_view summary) const;
  /// Step 3.
  double extract_informativeness(std::string_view caption, std::string_view summary) const;
  /// Step 4.
  StructuralFlags extract_structural_flags(std::string_view caption) const;

  /// Runs steps 1-4 in order and stops at the first failure, which is
  /// rethrown tagged with its step number.
  ToneProfile extract_tone_profile(std::string_view caption, std::string_view summary) const;

  /// Asks for a new style name when `extracted_styles` are all below the
  /// proposal threshold. Throws kPreconditionFailed otherwise and
  /// kDuplicateProposal when the reply names an existing style.
  StyleProposal propose_style_candidate(std::string_view caption, std::string_view summary,
                                        const IntensityMap& extracted_styles,
                                        std::string caption_id = {}) const;

  const AttributeInventory& inventory() const noexcept { return inventory_; }
  const ExtractionConfig& config() const noexcept { return config_; }

 private:
  ChatRequest make_request(std::string_view prompt, std::string_view task, const TemplateVars& vars,
                           std::map<std::string, std::string> context) const;

  const AttributeInventory& inventory_;
  const PromptLibrary& prompts_;
  ChatProvider& provider_;
  ExtractionConfig config_;
};

/// Bulleted list of names, one per line, as inserted for `{inventory}`.
std::string render_name_list(std::span<const std::string> names);

}  // namespace roadtones
