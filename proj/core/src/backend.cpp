#include "dagplan/backend.hpp"

#include <cctype>

#include "dagplan/errors.hpp"

namespace dagplan {

std::string_view to_string(Role role) noexcept {
  switch (role) {
    case Role::Supervisor:
      return "supervisor";
    case Role::Planner:
      return "planner";
    case Role::Executor:
      return "executor";
  }
  return "unknown";
}

std::optional<Role> parse_role(std::string_view text) noexcept {
  for (auto r : {Role::Supervisor, Role::Planner, Role::Executor}) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

std::int64_t count_tokens(std::string_view text) noexcept {
  std::int64_t count = 0;
  bool in_token = false;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptRule> rules, std::optional<std::string> fallback)
    : rules_(std::move(rules)), fallback_(std::move(fallback)) {}

ScriptedBackend::ScriptedBackend(Responder responder) : responder_(std::move(responder)) {}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_json(const nlohmann::json& doc) {
  std::vector<ScriptRule> rules;
  try {
    for (const auto& r : doc.value("rules", nlohmann::json::array())) {
      ScriptRule rule;
      if (r.contains("role")) {
        rule.role = parse_role(r.at("role").get<std::string>());
        if (!rule.role) throw ConfigError("scripted rule has unknown role '" + r.at("role").get<std::string>() + "'");
      }
      rule.contains = r.value("contains", std::vector<std::string>{});
      rule.absent = r.value("absent", std::vector<std::string>{});
      rule.response = r.at("response").get<std::string>();
      rules.push_back(std::move(rule));
    }
    std::optional<std::string> fallback;
    if (doc.contains("fallback") && !doc.at("fallback").is_null()) fallback = doc.at("fallback").get<std::string>();
    return std::make_shared<ScriptedBackend>(std::move(rules), std::move(fallback));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed scripted backend: ") + e.what());
  }
}

Completion ScriptedBackend::complete(Role role, std::string_view prompt) {
  auto finish = [&](std::string text) {
    TokenUsage usage{count_tokens(prompt), count_tokens(text)};
    return Completion{std::move(text), usage};
  };

  for (const auto& rule : rules_) {
    if (rule.role && *rule.role != role) continue;
    bool match = true;
    for (const auto& needle : rule.contains) {
      if (prompt.find(needle) == std::string_view::npos) {
        match = false;
        break;
      }
    }
    for (const auto& needle : rule.absent) {
      if (!match) break;
      if (prompt.find(needle) != std::string_view::npos) match = false;
    }
    if (match) return finish(rule.response);
  }
  if (responder_) {
    if (auto reply = responder_(role, prompt)) return finish(std::move(*reply));
  }
  if (fallback_) return finish(*fallback_);
  throw BackendError("scripted backend has no response for " + std::string(to_string(role)) + " prompt");
}

}  // namespace dagplan
