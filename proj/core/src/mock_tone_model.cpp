#include "roadtones/mock_tone_model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <optional>
#include <regex>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "roadtones/text_util.hpp"

namespace roadtones::mock {
namespace {

const std::unordered_set<std::string>& stopwords() {
  static const std::unordered_set<std::string> words{
      "a",       "about",   "above",  "after",  "again",   "against", "all",    "also",
      "am",      "an",      "and",    "any",    "are",     "around",  "as",     "at",
      "be",      "because", "been",   "before", "being",   "below",   "between", "both",
      "but",     "by",      "can",    "cant",   "could",   "did",     "do",     "does",
      "doing",   "down",    "during", "each",   "even",    "ever",    "every",  "few",
      "for",     "from",    "further", "had",   "has",     "have",    "having", "he",
      "her",     "here",    "hers",   "him",    "his",     "how",     "i",      "if",
      "in",      "into",    "is",     "it",     "its",     "itself",  "just",   "me",
      "more",    "most",    "my",     "no",     "nor",     "not",     "now",    "of",
      "off",     "on",      "once",   "one",    "only",    "onto",    "or",     "other",
      "our",     "out",     "over",   "own",    "same",    "she",     "should", "so",
      "some",    "such",    "than",   "that",   "the",     "their",   "them",   "then",
      "there",   "these",   "they",   "this",   "those",   "through", "to",     "too",
      "under",   "until",   "up",     "upon",   "very",    "really",  "was",    "way",
      "we",      "were",    "what",   "when",   "where",   "which",   "while",  "who",
      "whom",    "why",     "will",   "with",   "within",  "without", "would",  "you",
      "your",    "yours",   "us",     "while",  "still",   "well",    "got",    "get",
      "its",     "im",      "ive",    "dont",   "didnt",   "wasnt",   "isnt",   "thats",
  };
  return words;
}

// Words the caption writer inserts only when a structural control asks for
// them, so facts carried over from the summary must not contain them.
const std::unordered_set<std::string>& time_words() {
  static const std::unordered_set<std::string> words{
      "today",    "yesterday", "tonight",  "tomorrow", "morning",  "afternoon", "evening",
      "night",    "midnight",  "noon",     "weekend",  "monday",   "tuesday",   "wednesday",
      "thursday", "friday",    "saturday", "sunday",   "january",  "february",  "april",
      "june",     "july",      "august",   "september", "october", "november",  "december",
  };
  return words;
}

const std::unordered_set<std::string>& first_person_words() {
  static const std::unordered_set<std::string> words{
      "i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves", "im", "ive",
  };
  return words;
}

const std::vector<std::string>& gazetteer() {
  static const std::vector<std::string> places{
      "london",  "paris",     "berlin",   "tokyo",     "mumbai",  "delhi",      "bangalore",
      "bengaluru", "chennai", "hyderabad", "kolkata",  "pune",    "sydney",     "melbourne",
      "toronto", "chicago",   "boston",   "seattle",   "dubai",   "singapore",  "manchester",
      "dublin",  "madrid",    "rome",     "moscow",    "beijing", "shanghai",   "new york",
      "los angeles", "san francisco",
  };
  return places;
}

const std::vector<std::pair<std::string, std::string>>& contradiction_pairs() {
  static const std::vector<std::pair<std::string, std::string>> pairs{
      {"car", "truck"},       {"car", "bus"},          {"car", "motorcycle"}, {"truck", "bus"},
      {"cyclist", "pedestrian"}, {"left", "right"},    {"stopped", "sped"},   {"braked", "accelerated"},
      {"red", "green"},       {"north", "south"},      {"east", "west"},      {"rain", "sunny"},
  };
  return pairs;
}

const std::unordered_map<std::string, std::vector<std::string>>& curated_cues() {
  static const std::unordered_map<std::string, std::vector<std::string>> cues{
      // Writing styles.
      {"factual", {"reportedly", "according to footage", "on record", "documented"}},
      {"conversational", {"honestly", "you know", "seriously", "guys"}},
      {"instructional", {"make sure to", "always check", "step one", "remember to"}},
      {"exaggeration", {"insanely", "literally", "a million times", "worst ever"}},
      {"judgemental", {"shameful", "clueless", "irresponsible", "no excuse"}},
      {"advisory", {"please", "stay alert", "drive responsibly", "be careful"}},
      {"metaphorical", {"like a bullet", "a dance with death", "like a storm", "a ticking bomb"}},
      {"sarcasm", {"oh great", "just brilliant", "what a genius", "totally fine"}},
      {"narrative", {"it all started", "then suddenly", "in the end", "moments later"}},
      {"descriptive", {"gleaming", "narrow lane", "rain-soaked", "blinding"}},
      {"emotive", {"heartbreaking", "heart-wrenching", "so moved", "tears"}},
      {"persuasive", {"it is time", "imagine if", "demand change", "act now"}},
      {"rhetorical", {"why would", "who does that", "how hard is it", "isn't it"}},
      {"dramatic", {"out of nowhere", "chaos", "in a split second", "horror"}},
      {"informal", {"lol", "gonna", "ain't", "dude"}},
      {"critical", {"poor judgment", "unacceptable", "flawed", "sloppy"}},
      // Personality traits.
      {"anxious", {"can't believe", "so close", "nervous", "heart racing"}},
      {"angry", {"furious", "fed up", "idiots", "infuriating"}},
      {"emotional", {"shaking", "overwhelmed", "unreal", "still trembling"}},
      {"caring", {"stay safe", "look out for one another", "hope everyone is okay", "take care"}},
      {"humorous", {"haha", "comedy gold", "plot twist", "classic"}},
      {"sarcastic", {"sure, why not", "genius move", "bravo", "slow clap"}},
      {"cheerful", {"luckily", "what a relief", "all good", "phew"}},
      {"calm", {"no harm done", "steady", "breathe", "composed"}},
  };
  return cues;
}

// Generic realizations for attributes without curated cues. Each contains
// the attribute name exactly once, so each counts as one cue.
const std::array<std::string_view, 4> kGenericFrames{"feeling {}", "so {}", "truly {}", "{} vibes"};

const std::array<std::string_view, 10> kFillers{"and", "then", "just", "so",   "it",
                                                "was", "all",  "the",  "very", "really"};

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    // U+2019 RIGHT SINGLE QUOTATION MARK reads as an apostrophe.
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x80 &&
        static_cast<unsigned char>(text[i + 2]) == 0x99) {
      out.push_back('\'');
      i += 2;
      continue;
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
  }
  return out;
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

// Non-overlapping occurrences of `phrase` bounded by non-alphanumerics.
int count_phrase(std::string_view haystack, std::string_view phrase) {
  if (phrase.empty()) return 0;
  int count = 0;
  std::size_t pos = 0;
  while ((pos = haystack.find(phrase, pos)) != std::string_view::npos) {
    const bool left_ok = pos == 0 || !is_word_char(haystack[pos - 1]);
    const auto end = pos + phrase.size();
    const bool right_ok = end >= haystack.size() || !is_word_char(haystack[end]);
    if (left_ok && right_ok) {
      ++count;
      pos = end;
    } else {
      ++pos;
    }
  }
  return count;
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::string strip_punct(std::string_view word) {
  std::size_t b = 0;
  std::size_t e = word.size();
  while (b < e && !is_word_char(word[b])) ++b;
  while (e > b && !is_word_char(word[e - 1])) --e;
  return std::string(word.substr(b, e - b));
}

std::string capitalize(std::string text) {
  bool start = true;
  for (auto& c : text) {
    if (start && std::isalpha(static_cast<unsigned char>(c))) c = static_cast<char>(std::toupper(c));
    start = c == ' ';
  }
  return text;
}

std::size_t word_len(std::string_view phrase) { return split_ws(phrase).size(); }

}  // namespace

std::vector<std::string> content_words(std::string_view text) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (auto& token : word_tokens(normalize(text))) {
    if (token.size() < 3 || stopwords().contains(token)) continue;
    if (seen.insert(token).second) out.push_back(std::move(token));
  }
  return out;
}

double judge_agreement(const IntensityMap& target, const IntensityMap& extracted) {
  std::set<std::string> keys;
  for (const auto& [k, v] : target) {
    if (v != 0.0) keys.insert(k);
  }
  for (const auto& [k, v] : extracted) {
    if (v != 0.0) keys.insert(k);
  }
  if (keys.empty()) return 1.0;
  double total = 0.0;
  for (const auto& k : keys) {
    const auto t = target.find(k);
    const auto e = extracted.find(k);
    total += std::abs((t == target.end() ? 0.0 : t->second) - (e == extracted.end() ? 0.0 : e->second));
  }
  return std::clamp(1.0 - total / static_cast<double>(keys.size()), 0.0, 1.0);
}

double factual_consistency(std::string_view caption, std::string_view summary) {
  const auto cap = content_words(caption);
  const auto sum = content_words(summary);
  const std::unordered_set<std::string> sum_set(sum.begin(), sum.end());
  const std::unordered_set<std::string> cap_set(cap.begin(), cap.end());
  for (const auto& [a, b] : contradiction_pairs()) {
    if ((cap_set.contains(a) && !sum_set.contains(a) && sum_set.contains(b)) ||
        (cap_set.contains(b) && !sum_set.contains(b) && sum_set.contains(a))) {
      return 0.1;
    }
  }
  if (cap.empty()) return 0.5;
  const auto supported = std::count_if(cap.begin(), cap.end(),
                                       [&](const std::string& w) { return sum_set.contains(w); });
  return round2(0.4 + 0.6 * static_cast<double>(supported) / static_cast<double>(cap.size()));
}

double informativeness(std::string_view caption, std::string_view summary) {
  const auto sum = content_words(summary);
  if (sum.empty()) return 0.0;
  const auto cap = content_words(caption);
  const std::unordered_set<std::string> cap_set(cap.begin(), cap.end());
  const auto covered = std::count_if(sum.begin(), sum.end(),
                                     [&](const std::string& w) { return cap_set.contains(w); });
  return round2(static_cast<double>(covered) / static_cast<double>(sum.size()));
}

StructuralFlags structural_flags(std::string_view caption) {
  static const std::regex street(
      R"(\b[A-Z][a-z]+ (Street|St|Road|Rd|Avenue|Ave|Highway|Boulevard|Lane|Bridge)\b)");
  static const std::regex clock(R"(\b\d{1,2}(:\d{2})?\s?(am|pm)\b|\b\d{1,2}:\d{2}\b)");

  StructuralFlags flags;
  const std::string lower = normalize(caption);
  const std::string original(caption);
  for (const auto& place : gazetteer()) {
    if (count_phrase(lower, place) > 0) {
      flags.location = true;
      break;
    }
  }
  if (!flags.location) flags.location = std::regex_search(original, street);

  for (const auto& token : word_tokens(lower)) {
    if (time_words().contains(token)) flags.date_time = true;
    if (first_person_words().contains(token)) flags.first_person = true;
  }
  if (!flags.date_time) flags.date_time = std::regex_search(lower, clock);
  if (!flags.date_time) flags.date_time = count_phrase(lower, "rush hour") > 0;
  return flags;
}

std::vector<std::string> cue_phrases(std::string_view attribute) {
  const std::string key = to_lower_ascii(attribute);
  std::vector<std::string> out;
  if (const auto it = curated_cues().find(key); it != curated_cues().end()) out = it->second;
  out.push_back(key);
  return out;
}

int cue_count(std::string_view caption, std::string_view attribute) {
  const std::string lower = normalize(caption);
  int total = 0;
  for (const auto& phrase : cue_phrases(attribute)) total += count_phrase(lower, phrase);
  return total;
}

double intensity_for_count(int count) {
  static constexpr std::array<double, 5> kLevels{0.0, 0.3, 0.5, 0.7, 0.9};
  return kLevels[static_cast<std::size_t>(std::clamp(count, 0, 4))];
}

int count_for_intensity(double intensity) {
  return static_cast<int>(bin_intensity(std::clamp(intensity, 0.0, 1.0)));
}

IntensityMap score_attributes(std::string_view caption, std::span<const std::string> names,
                              bool keep_zero) {
  IntensityMap out;
  for (const auto& name : names) {
    const double value = intensity_for_count(cue_count(caption, name));
    if (value > 0.0 || keep_zero) out[name] = value;
  }
  return out;
}

std::string compose_caption(const CaptionPlan& plan, std::uint64_t seed) {
  static constexpr std::array<int, 4> kLengthOffsets{0, 1, -1, 2};
  const auto& s = plan.structural;
  const int budget = std::max(1, s.word_count + kLengthOffsets[seed % kLengthOffsets.size()]);

  // Facts: summary words in order, minus anything that would trip a
  // structural control on its own.
  const std::string lower_summary = normalize(plan.summary);
  std::optional<std::string> summary_place;
  for (const auto& place : gazetteer()) {
    if (count_phrase(lower_summary, place) > 0) {
      summary_place = capitalize(place);
      break;
    }
  }
  std::vector<std::string> facts;
  std::unordered_set<std::string> seen;
  for (const auto& raw : split_ws(plan.summary)) {
    const auto word = strip_punct(raw);
    if (word.empty()) continue;
    const auto lower = normalize(word);
    const auto tokens = word_tokens(lower);
    if (tokens.size() != 1) continue;
    const auto& tok = tokens.front();
    if (tok.size() < 3 || stopwords().contains(tok) || time_words().contains(tok) ||
        first_person_words().contains(tok)) {
      continue;
    }
    bool is_place = false;
    for (const auto& place : gazetteer()) is_place = is_place || place == tok;
    if (is_place || raw.find('#') != std::string::npos || raw.find('@') != std::string::npos) continue;
    if (seen.insert(tok).second) facts.push_back(word);
  }
  const auto summary_content = content_words(plan.summary).size();
  const auto wanted_facts = static_cast<std::size_t>(
      std::lround(std::clamp(s.informativeness, 0.0, 1.0) * static_cast<double>(summary_content)));
  facts.resize(std::min(facts.size(), wanted_facts));

  // Cues, strongest attribute first.
  struct Cue {
    double intensity;
    std::string name;
    std::vector<std::string> phrases;
  };
  std::vector<Cue> cues;
  auto add_family = [&](const IntensityMap& map) {
    for (const auto& [name, value] : map) {
      const int n = count_for_intensity(value);
      if (n == 0) continue;
      const std::string key = to_lower_ascii(name);
      std::vector<std::string> pool;
      if (const auto it = curated_cues().find(key); it != curated_cues().end()) {
        pool = it->second;
      } else {
        for (auto frame : kGenericFrames) {
          std::string phrase(frame);
          phrase.replace(phrase.find("{}"), 2, key);
          pool.push_back(std::move(phrase));
        }
      }
      Cue cue{value, name, {}};
      for (int i = 0; i < n; ++i) {
        cue.phrases.push_back(pool[(static_cast<std::size_t>(i) + seed) % pool.size()]);
      }
      cues.push_back(std::move(cue));
    }
  };
  add_family(plan.personality);
  add_family(plan.writing_style);
  std::stable_sort(cues.begin(), cues.end(), [](const Cue& a, const Cue& b) {
    return a.intensity != b.intensity ? a.intensity > b.intensity : a.name < b.name;
  });
  if (seed % 3 == 1 && !cues.empty()) cues.back().phrases.pop_back();

  std::vector<std::string> markers;
  std::string opener = s.first_person ? (seed % 2 == 0 ? "I" : "We") : "";
  if (s.location) markers.push_back(summary_place ? "in " + *summary_place : "on Main Street");
  if (s.date_time) markers.push_back("today");
  std::vector<std::string> tail;
  if (s.user_mentions) tail.emplace_back("@RoadSafetyHQ");
  if (s.hashtags) tail.emplace_back(seed % 2 == 0 ? "#RoadSafety" : "#DriveSafe");
  if (s.emojis) tail.emplace_back(seed % 2 == 0 ? "\xE2\x9A\xA0\xEF\xB8\x8F" : "\xF0\x9F\x9A\x97");

  auto total_words = [&]() {
    std::size_t n = opener.empty() ? 0 : 1;
    n += facts.size();
    for (const auto& m : markers) n += word_len(m);
    for (const auto& c : cues) {
      for (const auto& p : c.phrases) n += word_len(p);
    }
    return n + tail.size();
  };

  const auto target = static_cast<std::size_t>(budget);
  while (total_words() > target && !facts.empty()) facts.pop_back();
  for (auto it = cues.rbegin(); it != cues.rend() && total_words() > target; ++it) {
    while (total_words() > target && !it->phrases.empty()) it->phrases.pop_back();
  }
  std::vector<std::string> fillers;
  for (std::size_t i = 0; total_words() + fillers.size() < target; ++i) {
    fillers.emplace_back(kFillers[i % kFillers.size()]);
  }

  std::vector<std::string> parts;
  if (!opener.empty()) parts.push_back(opener);
  for (auto& f : facts) parts.push_back(f);
  for (auto& f : fillers) parts.push_back(f);
  for (auto& m : markers) parts.push_back(m);
  for (const auto& c : cues) {
    for (const auto& p : c.phrases) parts.push_back(p + ",");
  }
  if (!parts.empty() && parts.back().back() == ',') parts.back().back() = '!';
  for (auto& t : tail) parts.push_back(t);

  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out.push_back(' ');
    out += p;
  }
  return out;
}

std::string propose_style(std::span<const std::string> existing) {
  static const std::array<std::string_view, 6> kCandidates{"Alarmist",     "Nostalgic", "Poetic",
                                                            "Storytelling", "Technical", "Cautionary"};
  auto taken = [&](std::string_view name) {
    return std::any_of(existing.begin(), existing.end(),
                       [&](const std::string& e) { return iequals(e, name); });
  };
  for (auto c : kCandidates) {
    if (!taken(c)) return std::string(c);
  }
  for (int i = 2;; ++i) {
    std::string name = "Alarmist" + std::to_string(i);
    if (!taken(name)) return name;
  }
}

std::vector<double> hash_embedding(std::string_view text, std::size_t dim) {
  std::vector<double> v(dim, 0.0);
  if (dim == 0) return v;
  for (const auto& token : word_tokens(normalize(text))) {
    const auto h = fnv1a64(token);
    v[h % dim] += (h >> 63) != 0 ? -1.0 : 1.0;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }
  return v;
}

}  // namespace roadtones::mock
