#include "roadtones/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "roadtones/error.hpp"

namespace roadtones {
namespace {

constexpr std::string_view kComponent = "metrics";

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

std::string_view to_string(NarrativeScope scope) noexcept {
  switch (scope) {
    case NarrativeScope::kFull: return "full";
    case NarrativeScope::kWritingStyleOnly: return "writing_style";
    case NarrativeScope::kPersonalityOnly: return "personality";
  }
  return "full";
}

NarrativeScope narrative_scope_from_string(std::string_view text) {
  if (text == "full") return NarrativeScope::kFull;
  if (text == "writing_style") return NarrativeScope::kWritingStyleOnly;
  if (text == "personality") return NarrativeScope::kPersonalityOnly;
  throw Error(ErrorCode::kSchemaError, std::string(kComponent),
              "unknown narrative scope \"" + std::string(text) + "\"", "scope");
}

StructuralAlignment structural_alignment(const StructuralControls& target,
                                         const StructuralControls& measured) {
  if (target.word_count < 1) {
    throw Error(ErrorCode::kDegenerateTarget, std::string(kComponent),
                "target word_count must be >= 1, got " + std::to_string(target.word_count),
                "word_count");
  }
  StructuralAlignment out;
  out.e_i = std::abs(measured.informativeness - target.informativeness);
  const double target_len = target.word_count;
  out.e_len = std::min(1.0, std::abs(static_cast<double>(measured.word_count) - target_len) / target_len);
  int mismatches = 0;
  for (std::size_t i = 0; i < kBinaryAttributes.size(); ++i) {
    const auto a = kBinaryAttributes[i];
    out.attr_errors[i] = target.get(a) != measured.get(a) ? 1 : 0;
    mismatches += out.attr_errors[i];
  }
  out.sas = 1.0 - (out.e_i + out.e_len + mismatches) / 8.0;
  return out;
}

double narrative_alignment(std::optional<double> s_w, std::optional<double> s_p) {
  if (s_w && s_p) return (*s_w + *s_p) / 2.0;
  if (s_w) return *s_w;
  if (s_p) return *s_p;
  throw Error(ErrorCode::kPreconditionFailed, std::string(kComponent),
              "a narrative score needs at least one of S_w and S_p");
}

ScoreReport assemble_report(std::optional<double> s_p, std::optional<double> s_w,
                            const StructuralAlignment& structural, double fc) {
  ScoreReport r;
  r.s_p = s_p;
  r.s_w = s_w;
  r.scope = s_p && s_w ? NarrativeScope::kFull
            : s_w     ? NarrativeScope::kWritingStyleOnly
                      : NarrativeScope::kPersonalityOnly;
  r.nas = narrative_alignment(s_w, s_p);
  r.e_i = structural.e_i;
  r.e_len = structural.e_len;
  r.attr_errors = structural.attr_errors;
  r.sas = structural.sas;
  r.tas = (r.nas + r.sas) / 2.0;
  r.fc = fc;
  r.overall = (r.tas + r.fc) / 2.0;
  return r;
}

bool satisfies_identities(const ScoreReport& r, double tolerance) {
  if (!r.s_p && !r.s_w) return false;
  double errors = 0.0;
  for (int e : r.attr_errors) errors += e;
  const double sas = 1.0 - (r.e_i + r.e_len + errors) / 8.0;
  return near(r.nas, narrative_alignment(r.s_w, r.s_p), tolerance) && near(r.sas, sas, tolerance) &&
         near(r.tas, (r.nas + r.sas) / 2.0, tolerance) &&
         near(r.overall, (r.tas + r.fc) / 2.0, tolerance);
}

nlohmann::ordered_json to_json(const ScoreReport& r) {
  nlohmann::ordered_json doc;
  doc["scope"] = to_string(r.scope);
  doc["s_p"] = r.s_p ? nlohmann::ordered_json(*r.s_p) : nlohmann::ordered_json(nullptr);
  doc["s_w"] = r.s_w ? nlohmann::ordered_json(*r.s_w) : nlohmann::ordered_json(nullptr);
  doc["nas"] = r.nas;
  doc["e_i"] = r.e_i;
  doc["e_len"] = r.e_len;
  auto& errors = doc["attr_errors"] = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < kBinaryAttributes.size(); ++i) {
    errors[std::string(attribute_key(kBinaryAttributes[i]))] = r.attr_errors[i];
  }
  doc["sas"] = r.sas;
  doc["tas"] = r.tas;
  doc["fc"] = r.fc;
  doc["overall"] = r.overall;
  return doc;
}

ScoreReport score_report_from_json(const nlohmann::json& doc) {
  try {
    ScoreReport r;
    r.scope = narrative_scope_from_string(doc.value("scope", "full"));
    if (!doc.at("s_p").is_null()) r.s_p = doc.at("s_p").get<double>();
    if (!doc.at("s_w").is_null()) r.s_w = doc.at("s_w").get<double>();
    r.nas = doc.at("nas").get<double>();
    r.e_i = doc.at("e_i").get<double>();
    r.e_len = doc.at("e_len").get<double>();
    const auto& errors = doc.at("attr_errors");
    for (std::size_t i = 0; i < kBinaryAttributes.size(); ++i) {
      r.attr_errors[i] = errors.at(std::string(attribute_key(kBinaryAttributes[i]))).get<int>();
    }
    r.sas = doc.at("sas").get<double>();
    r.tas = doc.at("tas").get<double>();
    r.fc = doc.at("fc").get<double>();
    r.overall = doc.at("overall").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string(kComponent),
                std::string("malformed score report: ") + e.what());
  }
}

}  // namespace roadtones
