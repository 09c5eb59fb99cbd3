#include "roadtones/surface.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace roadtones {
namespace {

constexpr UChar32 kInvalid = -1;
constexpr UChar32 kZwj = 0x200D;
constexpr UChar32 kVs15 = 0xFE0E;
constexpr UChar32 kVs16 = 0xFE0F;
constexpr UChar32 kKeycap = 0x20E3;

struct CodePoint {
  UChar32 value;
  std::size_t begin;  // byte offsets into the caption
  std::size_t end;
};

std::vector<CodePoint> decode(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    out.push_back({c < 0 ? kInvalid : c, static_cast<std::size_t>(start), static_cast<std::size_t>(i)});
  }
  return out;
}

bool is_space(UChar32 c) { return c != kInvalid && u_hasBinaryProperty(c, UCHAR_WHITE_SPACE); }

bool is_word_char(UChar32 c) { return c != kInvalid && (c == '_' || u_isalnum(c)); }

bool is_tag_char(UChar32 c) { return c != kInvalid && (c == '_' || (c < 0x80 && u_isalnum(c))); }

bool has_emoji_property(UChar32 c) { return c != kInvalid && u_hasBinaryProperty(c, UCHAR_EMOJI); }

bool is_modifier(UChar32 c) {
  return c != kInvalid && u_hasBinaryProperty(c, UCHAR_EMOJI_MODIFIER);
}

bool is_regional_indicator(UChar32 c) { return c >= 0x1F1E6 && c <= 0x1F1FF; }

bool is_tag(UChar32 c) { return c >= 0xE0020 && c <= 0xE007F; }

bool is_keycap_base(UChar32 c) { return (c >= '0' && c <= '9') || c == '#' || c == '*'; }

// Extends an emoji starting at `i` over presentation selectors, skin-tone
// modifiers, tag sequences and ZWJ joins. Returns one past the last index.
std::size_t extend_emoji(const std::vector<CodePoint>& cps, std::size_t i) {
  std::size_t j = i + 1;
  while (j < cps.size()) {
    const UChar32 c = cps[j].value;
    if (c == kVs15 || c == kVs16 || is_modifier(c) || is_tag(c)) {
      ++j;
    } else if (c == kZwj && j + 1 < cps.size() && has_emoji_property(cps[j + 1].value) &&
               cps[j + 1].value >= 0x80) {
      j += 2;
    } else {
      break;
    }
  }
  return j;
}

template <typename Pred>
std::size_t run_end(const std::vector<CodePoint>& cps, std::size_t i, Pred pred) {
  while (i < cps.size() && pred(cps[i].value)) ++i;
  return i;
}

}  // namespace

SurfaceFeatures extract_surface(std::string_view caption) {
  SurfaceFeatures out;
  const auto cps = decode(caption);
  const auto slice = [&](std::size_t from, std::size_t to) {
    return std::string(caption.substr(cps[from].begin, cps[to - 1].end - cps[from].begin));
  };

  bool in_word = false;
  for (std::size_t i = 0; i < cps.size();) {
    const UChar32 c = cps[i].value;
    const bool space = is_space(c);
    if (!space && !in_word) ++out.word_count;
    in_word = !space;

    const bool after_word_char = i > 0 && is_word_char(cps[i - 1].value);
    if ((c == '#' || c == '@') && !after_word_char && i + 1 < cps.size() &&
        is_tag_char(cps[i + 1].value)) {
      const std::size_t end = run_end(cps, i + 1, is_tag_char);
      (c == '#' ? out.hashtags : out.mentions).push_back(slice(i, end));
      i = end;
      continue;
    }

    if (is_keycap_base(c)) {
      std::size_t j = i + 1;
      if (j < cps.size() && cps[j].value == kVs16) ++j;
      if (j < cps.size() && cps[j].value == kKeycap) {
        out.emojis.push_back(slice(i, j + 1));
        i = j + 1;
        continue;
      }
    }

    if (is_regional_indicator(c)) {
      const std::size_t end =
          (i + 1 < cps.size() && is_regional_indicator(cps[i + 1].value)) ? i + 2 : i + 1;
      out.emojis.push_back(slice(i, end));
      i = end;
      continue;
    }

    if (c >= 0x80 && has_emoji_property(c) && !is_modifier(c)) {
      const std::size_t end = extend_emoji(cps, i);
      out.emojis.push_back(slice(i, end));
      i = end;
      continue;
    }
    ++i;
  }
  return out;
}

int count_words(std::string_view text) {
  int count = 0;
  bool in_word = false;
  for (const auto& cp : decode(text)) {
    const bool space = is_space(cp.value);
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

}  // namespace roadtones
