#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace roadtones {

/// Surface markers read straight off the caption text.
struct SurfaceFeatures {
  std::vector<std::string> hashtags;  // "#CyclistLife"; every occurrence, in text order
  std::vector<std::string> mentions;  // "@Bob"
  std::vector<std::string> emojis;    // one entry per emoji sequence
  int word_count = 0;

  friend bool operator==(const SurfaceFeatures&, const SurfaceFeatures&) = default;
};

/// Deterministic surface extraction.
///
/// - Words: maximal runs of non-White_Space code points; a standalone emoji
///   is a word.
/// - Hashtags / mentions: `#` or `@` followed by `[A-Za-z0-9_]+`, not
///   preceded by a letter, digit or underscore.
/// - Emojis: code points with the Unicode Emoji property. Keycap sequences,
///   regional-indicator flag pairs, modifier sequences and ZWJ sequences
///   count once. ASCII code points (digits, `#`, `*`) count only as keycap
///   bases.
///
/// Invalid UTF-8 bytes are treated as ordinary non-space characters.
SurfaceFeatures extract_surface(std::string_view caption);

/// Whitespace-token count, the same rule extract_surface uses.
int count_words(std::string_view text);

}  // namespace roadtones
