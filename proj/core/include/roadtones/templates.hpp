#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace roadtones {

using TemplateVars = std::map<std::string, std::string, std::less<>>;

/// A prompt template with `{name}` placeholders. A placeholder is a brace
/// pair around an identifier (`[A-Za-z_][A-Za-z0-9_]*`); any other brace is
/// literal text, so JSON examples can appear verbatim.
///
/// A file may be split into a system and a user message with the marker
/// lines `=== system ===` and `=== user ===`; without markers the whole file
/// is the user message.
class PromptTemplate {
 public:
  PromptTemplate() = default;
  PromptTemplate(std::string name, std::string_view text);

  static PromptTemplate load(const std::filesystem::path& path);

  const std::string& name() const noexcept { return name_; }
  const std::string& system_text() const noexcept { return system_; }
  const std::string& user_text() const noexcept { return user_; }
  const std::set<std::string>& placeholders() const noexcept { return placeholders_; }

  /// Throws Error(kTemplateError) naming the first placeholder that has no
  /// value in `vars`.
  std::string render_system(const TemplateVars& vars) const;
  std::string render_user(const TemplateVars& vars) const;

  /// Throws Error(kTemplateError) when the template uses a placeholder
  /// outside `allowed`.
  void require_only(const std::set<std::string, std::less<>>& allowed) const;

 private:
  std::string render(const std::string& text, const TemplateVars& vars) const;

  std::string name_;
  std::string system_;
  std::string user_;
  std::set<std::string> placeholders_;
};

/// Named prompt files loaded from a directory (`<name>.txt`).
class PromptLibrary {
 public:
  /// Names every pipeline stage expects.
  static const std::vector<std::string>& required_names();

  PromptLibrary() = default;
  static PromptLibrary load(const std::filesystem::path& directory);

  void add(PromptTemplate prompt);
  const PromptTemplate& get(std::string_view name) const;
  bool contains(std::string_view name) const;

 private:
  std::map<std::string, PromptTemplate, std::less<>> prompts_;
};

/// Placeholder names each prompt may use.
const std::set<std::string, std::less<>>& allowed_placeholders(std::string_view prompt_name);

}  // namespace roadtones
