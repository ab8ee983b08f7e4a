#pragma once

#include <functional>
#include <string>
#include <utility>

#include "dagplan/backend.hpp"
#include "dagplan/errors.hpp"
#include "dagplan/prompt.hpp"

namespace dagplan {

/// A role call that never produced a parseable reply within its retry budget.
class RoleFault : public Error {
 public:
  RoleFault(const std::string& message, std::string last_raw, TokenUsage usage, int attempts)
      : Error(message), last_raw_(std::move(last_raw)), usage_(usage), attempts_(attempts) {}

  const std::string& last_raw() const noexcept { return last_raw_; }
  const TokenUsage& usage() const noexcept { return usage_; }
  int attempts() const noexcept { return attempts_; }

 private:
  std::string last_raw_;
  TokenUsage usage_;
  int attempts_;
};

/// One completion issued by call_role, reported to the observer.
struct RoleAttempt {
  Role role;
  TemplateName template_name;
  int attempt = 1;  // 1-based
  std::string prompt;
  Completion completion;
  bool parsed = false;
  std::string error;  // parse error message when !parsed
};

using RoleObserver = std::function<void(const RoleAttempt&)>;

template <typename T>
struct RoleResult {
  T value;
  TokenUsage usage;  // summed over every attempt
  int attempts = 1;
  std::string raw;   // reply that parsed
  std::string prompt;  // prompt of the successful attempt
};

/// The line appended to the prompt when re-asking after a parse failure.
std::string format_reminder(int attempt, const std::string& error);

/// Renders, completes and parses; on ParseError re-prompts up to
/// `retry_budget` more times with a one-line format reminder appended.
/// Throws RoleFault once the budget is spent.
template <typename Parser>
auto call_role(ModelBackend& backend, Role role, const PromptTemplate& tpl, const Bindings& bindings,
               Parser&& parser, int retry_budget, const RoleObserver& observer = {})
    -> RoleResult<std::decay_t<decltype(parser(std::string_view{}))>> {
  using Value = std::decay_t<decltype(parser(std::string_view{}))>;
  if (retry_budget < 0) throw ConfigError("retry budget must be nonnegative");

  const std::string base_prompt = render_prompt(tpl, bindings);
  std::string prompt = base_prompt;
  TokenUsage total;
  std::string last_raw;
  std::string last_error;

  for (int attempt = 1; attempt <= retry_budget + 1; ++attempt) {
    Completion completion = backend.complete(role, prompt);
    total += completion.usage;
    last_raw = completion.text;
    RoleAttempt record{role, tpl.name(), attempt, prompt, completion, false, {}};
    try {
      Value value = parser(std::string_view(completion.text));
      record.parsed = true;
      if (observer) observer(record);
      return RoleResult<Value>{std::move(value), total, attempt, std::move(completion.text), std::move(prompt)};
    } catch (const ParseError& e) {
      last_error = e.what();
      record.error = last_error;
      if (observer) observer(record);
    }
    prompt = base_prompt + format_reminder(attempt + 1, last_error);
  }
  throw RoleFault(std::string(to_string(role)) + " reply for '" + std::string(to_string(tpl.name())) +
                      "' unparseable after " + std::to_string(retry_budget + 1) + " attempts: " + last_error,
                  last_raw, total, retry_budget + 1);
}

}  // namespace dagplan
