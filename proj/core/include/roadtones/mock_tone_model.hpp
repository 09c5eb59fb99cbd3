#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roadtones/tone_schema.hpp"

// Rule-based stand-ins for the language-model steps. They are not a model of
// tone; they exist so the pipeline can run hermetically and reproducibly. A
// caption written by compose_caption() is read back consistently by the
// cue, flag and informativeness rules below.
namespace roadtones::mock {

/// Lowercase content words: alphanumeric tokens of length >= 3 that are not
/// stopwords, deduplicated in first-occurrence order.
std::vector<std::string> content_words(std::string_view text);

/// 1 - mean |target - extracted| over the union of non-zero keys (absent =
/// 0); an empty union scores 1.
double judge_agreement(const IntensityMap& target, const IntensityMap& extracted);

/// 0.1 if the caption uses a word from a contradiction pair whose partner
/// appears in the summary (and the word itself does not); otherwise
/// 0.4 + 0.6 * precision of caption content words against the summary
/// (0.5 when the caption has no content words). Rounded to 0.01.
double factual_consistency(std::string_view caption, std::string_view summary);

/// Share of the summary's content words the caption repeats, rounded to 0.01.
double informativeness(std::string_view caption, std::string_view summary);

struct StructuralFlags {
  bool location = false;
  bool date_time = false;
  bool first_person = false;
};

/// Gazetteer / "<Capitalized> Street" for location, a time lexicon for
/// date/time, first-person pronouns for the viewpoint.
StructuralFlags structural_flags(std::string_view caption);

/// Cue phrases that signal an attribute. Every attribute at least has its
/// own lowercase name.
std::vector<std::string> cue_phrases(std::string_view attribute);

/// Number of cue occurrences for `attribute` in the caption.
int cue_count(std::string_view caption, std::string_view attribute);

/// Maps a cue count to an intensity: 0, 0.3, 0.5, 0.7, 0.9 for 0..4+.
double intensity_for_count(int count);

/// Cue count used to express an intensity: 0..4 for Absent..VeryStrong.
int count_for_intensity(double intensity);

/// Scores every name by its cues; names with no cue map to 0.
IntensityMap score_attributes(std::string_view caption, std::span<const std::string> names,
                              bool keep_zero);

struct CaptionPlan {
  std::string summary;
  IntensityMap personality;
  IntensityMap writing_style;
  StructuralControls structural;
};

/// Writes a caption that realizes the plan within its word budget. `seed`
/// perturbs cue choice and length so repeated samples differ.
std::string compose_caption(const CaptionPlan& plan, std::uint64_t seed);

/// First name from a fixed candidate list not already present
/// (case-insensitive).
std::string propose_style(std::span<const std::string> existing);

/// Signed feature hashing of lowercase word tokens, L2-normalized.
std::vector<double> hash_embedding(std::string_view text, std::size_t dim);

}  // namespace roadtones::mock
