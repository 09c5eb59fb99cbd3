#pragma once

#include <array>
#include <optional>
#include <string_view>

#include <nlohmann/json.hpp>

#include "roadtones/tone_schema.hpp"

namespace roadtones {

/// Which narrative families a report scores. Partial scopes leave the other
/// family out of NAS entirely rather than scoring it as 0.
enum class NarrativeScope { kFull, kWritingStyleOnly, kPersonalityOnly };

std::string_view to_string(NarrativeScope scope) noexcept;
NarrativeScope narrative_scope_from_string(std::string_view text);

/// Per-attribute disagreement, indexed like kBinaryAttributes.
using AttributeErrors = std::array<int, 6>;

struct StructuralAlignment {
  double sas = 1.0;
  double e_i = 0.0;
  double e_len = 0.0;
  AttributeErrors attr_errors{};
};

/// e_I = |I_hat - I*|, e_len = min(1, |l_hat - l*| / l*), one error per
/// disagreeing binary attribute, SAS = 1 - (e_I + e_len + sum errors) / 8.
/// Throws Error(kDegenerateTarget) when target.word_count < 1.
StructuralAlignment structural_alignment(const StructuralControls& target,
                                         const StructuralControls& measured);

struct ScoreReport {
  std::optional<double> s_p;
  std::optional<double> s_w;
  double nas = 0.0;
  double e_i = 0.0;
  double e_len = 0.0;
  AttributeErrors attr_errors{};
  double sas = 0.0;
  double tas = 0.0;
  double fc = 0.0;
  double overall = 0.0;
  NarrativeScope scope = NarrativeScope::kFull;

  friend bool operator==(const ScoreReport&, const ScoreReport&) = default;
};

/// Mean of the scored families; with both present this is (S_w + S_p) / 2.
double narrative_alignment(std::optional<double> s_w, std::optional<double> s_p);

/// Builds a report from its components: TAS = (NAS + SAS) / 2 and
/// Overall = (TAS + FC) / 2. The scope follows from which scores are set.
/// Throws Error(kPreconditionFailed) if neither narrative score is set.
ScoreReport assemble_report(std::optional<double> s_p, std::optional<double> s_w,
                            const StructuralAlignment& structural, double fc);

/// Recomputes every derived field and compares within `tolerance`.
bool satisfies_identities(const ScoreReport& report, double tolerance = 1e-12);

nlohmann::ordered_json to_json(const ScoreReport& report);
ScoreReport score_report_from_json(const nlohmann::json& doc);

}  // namespace roadtones
