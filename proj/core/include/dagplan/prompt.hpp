#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace dagplan {

enum class TemplateName { Construct, Plan, Execute, Evaluate, Replan, Revise, React };

inline constexpr std::array<TemplateName, 7> kAllTemplates = {
    TemplateName::Construct, TemplateName::Plan,   TemplateName::Execute, TemplateName::Evaluate,
    TemplateName::Replan,    TemplateName::Revise, TemplateName::React};

std::string_view to_string(TemplateName name) noexcept;
std::optional<TemplateName> parse_template_name(std::string_view text) noexcept;

/// Placeholder names each template must use, no more and no fewer.
const std::set<std::string>& required_placeholders(TemplateName name);

using Bindings = std::map<std::string, std::string, std::less<>>;

/// A named prompt body with `{placeholder}` markers. `{{` and `}}` render as
/// literal braces.
class PromptTemplate {
 public:
  /// Throws ConfigError when the body's placeholders differ from
  /// required_placeholders(name).
  PromptTemplate(TemplateName name, std::string body);

  TemplateName name() const noexcept { return name_; }
  const std::string& body() const noexcept { return body_; }
  std::set<std::string> placeholders() const;

 private:
  TemplateName name_;
  std::string body_;
};

/// Placeholder names occurring in `body`, ignoring `{{`/`}}` escapes.
std::set<std::string> scan_placeholders(std::string_view body);

/// Single pass substitution; bound values are inserted verbatim and never
/// re-scanned. A missing `guidance` renders as "None"; any other missing
/// binding throws RenderError naming the placeholder.
std::string render_prompt(const PromptTemplate& tpl, const Bindings& bindings);

/// The full template catalogue. Defaults are the built-in bodies; a directory
/// of `<name>.txt` files overrides any subset of them.
class TemplateSet {
 public:
  static TemplateSet defaults();
  static TemplateSet from_directory(const std::filesystem::path& dir);

  const PromptTemplate& get(TemplateName name) const;

 private:
  std::map<TemplateName, PromptTemplate> templates_;
};

}  // namespace dagplan
