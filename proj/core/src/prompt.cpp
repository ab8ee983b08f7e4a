#include "dagplan/prompt.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "dagplan/errors.hpp"

namespace dagplan {

namespace detail {
std::string_view embedded_template(std::string_view name);
}

std::string_view to_string(TemplateName name) noexcept {
  switch (name) {
    case TemplateName::Construct:
      return "construct";
    case TemplateName::Plan:
      return "plan";
    case TemplateName::Execute:
      return "execute";
    case TemplateName::Evaluate:
      return "evaluate";
    case TemplateName::Replan:
      return "replan";
    case TemplateName::Revise:
      return "revise";
    case TemplateName::React:
      return "react";
  }
  return "unknown";
}

std::optional<TemplateName> parse_template_name(std::string_view text) noexcept {
  for (auto n : kAllTemplates) {
    if (to_string(n) == text) return n;
  }
  return std::nullopt;
}

const std::set<std::string>& required_placeholders(TemplateName name) {
  static const std::map<TemplateName, std::set<std::string>> table = {
      {TemplateName::Construct, {"task_description", "admissible_commands"}},
      {TemplateName::Plan, {"task_description", "nodes_description", "admissible_commands", "history"}},
      {TemplateName::Execute,
       {"task_description", "subgoal", "plan", "guidance", "admissible_commands", "history"}},
      {TemplateName::Evaluate,
       {"task_description", "subgoal", "current_plan", "admissible_commands", "history"}},
      {TemplateName::Replan,
       {"task_description", "subgoal", "current_plan", "reason", "admissible_commands", "history"}},
      {TemplateName::Revise,
       {"task_description", "current_step", "history", "dag_state", "admissible_commands"}},
      {TemplateName::React, {"task_description", "admissible_commands", "history"}},
  };
  return table.at(name);
}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Length of an identifier placeholder starting at body[pos] == '{', or 0.
std::size_t placeholder_length(std::string_view body, std::size_t pos) {
  std::size_t i = pos + 1;
  if (i >= body.size() || !is_ident_start(body[i])) return 0;
  while (i < body.size() && is_ident_char(body[i])) ++i;
  if (i >= body.size() || body[i] != '}') return 0;
  return i - pos + 1;
}

}  // namespace

std::set<std::string> scan_placeholders(std::string_view body) {
  std::set<std::string> out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body.compare(i, 2, "{{") == 0 || body.compare(i, 2, "}}") == 0) {
      ++i;
      continue;
    }
    if (body[i] != '{') continue;
    if (std::size_t len = placeholder_length(body, i)) {
      out.emplace(body.substr(i + 1, len - 2));
      i += len - 1;
    }
  }
  return out;
}

PromptTemplate::PromptTemplate(TemplateName name, std::string body) : name_(name), body_(std::move(body)) {
  const auto found = scan_placeholders(body_);
  const auto& required = required_placeholders(name_);
  if (found != required) {
    std::string msg = "template '" + std::string(to_string(name_)) + "' placeholders mismatch:";
    for (const auto& p : required) {
      if (!found.count(p)) msg += " missing {" + p + "}";
    }
    for (const auto& p : found) {
      if (!required.count(p)) msg += " unexpected {" + p + "}";
    }
    throw ConfigError(msg);
  }
}

std::set<std::string> PromptTemplate::placeholders() const { return scan_placeholders(body_); }

std::string render_prompt(const PromptTemplate& tpl, const Bindings& bindings) {
  const std::string_view body = tpl.body();
  std::string out;
  out.reserve(body.size() + 256);
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body.compare(i, 2, "{{") == 0) {
      out += '{';
      ++i;
      continue;
    }
    if (body.compare(i, 2, "}}") == 0) {
      out += '}';
      ++i;
      continue;
    }
    if (body[i] == '{') {
      if (std::size_t len = placeholder_length(body, i)) {
        const std::string_view name = body.substr(i + 1, len - 2);
        if (auto it = bindings.find(name); it != bindings.end()) {
          out += it->second;
        } else if (name == "guidance") {
          out += "None";
        } else {
          throw RenderError("template '" + std::string(to_string(tpl.name())) + "' has no binding for {" +
                                std::string(name) + "}",
                            std::string(name));
        }
        i += len - 1;
        continue;
      }
    }
    out += body[i];
  }
  return out;
}

TemplateSet TemplateSet::defaults() {
  TemplateSet set;
  for (auto name : kAllTemplates) {
    set.templates_.emplace(name, PromptTemplate(name, std::string(detail::embedded_template(to_string(name)))));
  }
  return set;
}

TemplateSet TemplateSet::from_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw ConfigError("template directory not found: " + dir.string());
  }
  TemplateSet set = defaults();
  for (auto name : kAllTemplates) {
    const auto file = dir / (std::string(to_string(name)) + ".txt");
    if (!std::filesystem::exists(file)) continue;
    std::ifstream in(file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string body = ss.str();
    while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.pop_back();
    set.templates_.insert_or_assign(name, PromptTemplate(name, std::move(body)));
  }
  return set;
}

const PromptTemplate& TemplateSet::get(TemplateName name) const { return templates_.at(name); }

}  // namespace dagplan
