#include "roadtones/templates.hpp"

#include <cctype>

#include "roadtones/error.hpp"
#include "roadtones/text_util.hpp"

namespace roadtones {
namespace {

constexpr std::string_view kComponent = "templates";
constexpr std::string_view kSystemMarker = "=== system ===";
constexpr std::string_view kUserMarker = "=== user ===";

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Returns the identifier length when text[pos] opens a placeholder, else 0.
std::size_t placeholder_at(std::string_view text, std::size_t pos) {
  if (text[pos] != '{' || pos + 1 >= text.size() || !ident_start(text[pos + 1])) return 0;
  std::size_t end = pos + 1;
  while (end < text.size() && ident_char(text[end])) ++end;
  if (end >= text.size() || text[end] != '}') return 0;
  return end - pos - 1;
}

void collect(std::string_view text, std::set<std::string>& out) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (auto len = placeholder_at(text, i); len > 0) {
      out.emplace(text.substr(i + 1, len));
      i += len + 1;
    }
  }
}

std::string strip_block(std::string_view text) { return std::string(trim(text)); }

}  // namespace

PromptTemplate::PromptTemplate(std::string name, std::string_view text) : name_(std::move(name)) {
  const auto sys = text.find(kSystemMarker);
  const auto usr = text.find(kUserMarker);
  if (sys == std::string_view::npos && usr == std::string_view::npos) {
    user_ = strip_block(text);
  } else if (sys != std::string_view::npos && usr != std::string_view::npos && sys < usr) {
    system_ = strip_block(text.substr(sys + kSystemMarker.size(), usr - sys - kSystemMarker.size()));
    user_ = strip_block(text.substr(usr + kUserMarker.size()));
  } else if (usr != std::string_view::npos && sys == std::string_view::npos) {
    user_ = strip_block(text.substr(usr + kUserMarker.size()));
  } else {
    throw Error(ErrorCode::kTemplateError, std::string(kComponent),
                "template '" + name_ + "': system section must precede the user section");
  }
  if (user_.empty()) {
    throw Error(ErrorCode::kTemplateError, std::string(kComponent),
                "template '" + name_ + "' has an empty user message");
  }
  collect(system_, placeholders_);
  collect(user_, placeholders_);
}

PromptTemplate PromptTemplate::load(const std::filesystem::path& path) {
  return PromptTemplate(path.stem().string(), read_text_file(path));
}

std::string PromptTemplate::render(const std::string& text, const TemplateVars& vars) const {
  std::string out;
  out.reserve(text.size() + 256);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (auto len = placeholder_at(text, i); len > 0) {
      const std::string_view key(text.data() + i + 1, len);
      auto it = vars.find(key);
      if (it == vars.end()) {
        throw Error(ErrorCode::kTemplateError, std::string(kComponent),
                    "template '" + name_ + "' uses unknown placeholder {" + std::string(key) + "}",
                    std::string(key));
      }
      out += it->second;
      i += len + 1;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

std::string PromptTemplate::render_system(const TemplateVars& vars) const {
  return render(system_, vars);
}

std::string PromptTemplate::render_user(const TemplateVars& vars) const {
  return render(user_, vars);
}

void PromptTemplate::require_only(const std::set<std::string, std::less<>>& allowed) const {
  for (const auto& name : placeholders_) {
    if (!allowed.contains(name)) {
      throw Error(ErrorCode::kTemplateError, std::string(kComponent),
                  "template '" + name_ + "' uses undocumented placeholder {" + name + "}", name);
    }
  }
}

const std::vector<std::string>& PromptLibrary::required_names() {
  static const std::vector<std::string> kNames{
      "extract_writing_style", "extract_personality", "extract_informativeness",
      "extract_structural",    "propose_style",       "judge_personality",
      "judge_writing_style",   "judge_factual_consistency", "tcgen_stage1",
      "tcgen_stage2"};
  return kNames;
}

PromptLibrary PromptLibrary::load(const std::filesystem::path& directory) {
  PromptLibrary library;
  for (const auto& name : required_names()) {
    auto prompt = PromptTemplate::load(directory / (name + ".txt"));
    prompt.require_only(allowed_placeholders(name));
    library.add(std::move(prompt));
  }
  return library;
}

void PromptLibrary::add(PromptTemplate prompt) {
  auto name = prompt.name();
  prompts_.insert_or_assign(std::move(name), std::move(prompt));
}

const PromptTemplate& PromptLibrary::get(std::string_view name) const {
  auto it = prompts_.find(name);
  if (it == prompts_.end()) {
    throw Error(ErrorCode::kTemplateError, std::string(kComponent),
                "no prompt template named '" + std::string(name) + "'");
  }
  return it->second;
}

bool PromptLibrary::contains(std::string_view name) const { return prompts_.contains(name); }

const std::set<std::string, std::less<>>& allowed_placeholders(std::string_view prompt_name) {
  static const std::set<std::string, std::less<>> kExtraction{"caption", "summary", "inventory"};
  static const std::set<std::string, std::less<>> kJudge{"target", "extracted", "caption",
                                                         "summary"};
  static const std::set<std::string, std::less<>> kGeneration{
      "summary", "spec", "prior_caption", "constraints", "word_count"};
  if (prompt_name.starts_with("judge_")) return kJudge;
  if (prompt_name.starts_with("tcgen_")) return kGeneration;
  return kExtraction;
}

}  // namespace roadtones
