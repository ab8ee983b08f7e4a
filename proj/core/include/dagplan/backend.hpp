#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace dagplan {

enum class Role { Supervisor, Planner, Executor };

std::string_view to_string(Role role) noexcept;
std::optional<Role> parse_role(std::string_view text) noexcept;

struct TokenUsage {
  std::int64_t prompt_tokens = 0;
  std::int64_t output_tokens = 0;

  TokenUsage& operator+=(const TokenUsage& other) noexcept {
    prompt_tokens += other.prompt_tokens;
    output_tokens += other.output_tokens;
    return *this;
  }
  friend TokenUsage operator+(TokenUsage a, const TokenUsage& b) noexcept { return a += b; }
  friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

struct Completion {
  std::string text;
  TokenUsage usage;

  friend bool operator==(const Completion&, const Completion&) = default;
};

/// Whitespace-delimited token count.
std::int64_t count_tokens(std::string_view text) noexcept;

/// Seam between the orchestration logic and a language model.
/// Implementations must tolerate concurrent calls from independent runs.
class ModelBackend {
 public:
  virtual ~ModelBackend() = default;
  virtual Completion complete(Role role, std::string_view prompt) = 0;
  virtual std::string describe() const = 0;
};

/// One row of a scripted response table. A rule fires when its role matches
/// (or is unset), every `contains` string occurs in the prompt and no
/// `absent` string does.
struct ScriptRule {
  std::optional<Role> role;
  std::vector<std::string> contains;
  std::vector<std::string> absent;
  std::string response;
};

/// Deterministic backend for tests and offline runs. The reply is a pure
/// function of (role, prompt): the first matching rule wins, otherwise the
/// responder (if any) is consulted, otherwise the fallback is returned, and
/// with none of these set the call throws BackendError.
class ScriptedBackend final : public ModelBackend {
 public:
  using Responder = std::function<std::optional<std::string>(Role, std::string_view prompt)>;

  ScriptedBackend() = default;
  explicit ScriptedBackend(std::vector<ScriptRule> rules, std::optional<std::string> fallback = std::nullopt);
  explicit ScriptedBackend(Responder responder);

  /// {"rules": [{"role": ..., "contains": [...], "absent": [...], "response": ...}], "fallback": ...}
  static std::shared_ptr<ScriptedBackend> from_json(const nlohmann::json& doc);

  Completion complete(Role role, std::string_view prompt) override;
  std::string describe() const override { return "scripted"; }

 private:
  std::vector<ScriptRule> rules_;
  Responder responder_;
  std::optional<std::string> fallback_;
};

struct RemoteChatSettings {
  std::string endpoint;  // full URL of the chat-completions route
  std::string model;
  double temperature = 0.0;
  std::string api_key_env;  // name of the variable holding the credential
  int timeout_seconds = 120;
};

/// Chat-completions HTTP client: POSTs {model, messages, temperature} and
/// reads choices[0].message.content plus usage.{prompt,completion}_tokens.
class RemoteChatBackend final : public ModelBackend {
 public:
  /// Throws ConfigError when the credential variable is declared but unset.
  explicit RemoteChatBackend(RemoteChatSettings settings);

  Completion complete(Role role, std::string_view prompt) override;
  std::string describe() const override { return "remote:" + settings_.model; }

  /// Request body for one prompt. Exposed for wire-format tests.
  nlohmann::json request_body(std::string_view prompt) const;
  /// Throws BackendError when the response lacks the expected fields.
  static Completion parse_response(const nlohmann::json& body, std::string_view prompt);

 private:
  RemoteChatSettings settings_;
  std::string api_key_;
};

}  // namespace dagplan
