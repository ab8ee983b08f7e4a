#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dagplan/engine.hpp"
#include "dagplan/graph_io.hpp"
#include "dagplan/roles.hpp"

namespace dagplan::detail {

/// Bookkeeping shared by every controller: step counting, the token ledger,
/// role calls with telemetry, and report assembly.
class RunState {
 public:
  RunState(Method method, const TaskInstance& task, Environment& env, const RunConfig& config, TraceSink* sink,
           std::string run_id);

  const TaskInstance& task() const noexcept { return task_; }
  Environment& env() noexcept { return env_; }
  const RunConfig& config() const noexcept { return config_; }
  /// Records an event and notifies the configured observer.
  const TraceEvent& emit(EventKind kind, nlohmann::json payload);
  /// Graph handed to the observer with every later event.
  void watch(const TaskGraph* graph) noexcept { graph_ = graph; }
  int steps() const noexcept { return steps_; }
  bool budget_left() const noexcept { return steps_ < config_.s_max; }
  const std::vector<TraceEntry>& global_trace() const noexcept { return global_trace_; }

  /// task_description and admissible_commands.
  Bindings base_bindings() const;

  /// One role call with retries. Every attempt becomes a role_call event
  /// and a ledger entry under `scope`. Backend failures surface as RoleFault.
  template <typename Parser>
  auto call(Role role, TemplateName name, const Bindings& bindings, Parser&& parser, const std::string& scope) {
    auto observer = [&](const RoleAttempt& a) { record_attempt(a, scope); };
    try {
      return call_role(config_.backends.for_role(role), role, config_.templates.get(name), bindings,
                       std::forward<Parser>(parser), config_.parser_retry_budget, observer);
    } catch (const BackendError& e) {
      throw RoleFault(std::string(to_string(role)) + " backend failed: " + e.what(), "", {}, 0);
    }
  }

  /// Steps the environment once, counts the interaction and emits env_step.
  StepResult step(const std::string& action, const std::string& scope);

  /// Emits run_end and assembles the report.
  RunReport finish(RunTerminal terminal, std::string reason, const TaskGraph* graph = nullptr,
                   nlohmann::json extra = nlohmann::json::object());

 private:
  void record_attempt(const RoleAttempt& attempt, const std::string& scope);

  Method method_;
  const TaskInstance& task_;
  Environment& env_;
  const RunConfig& config_;
  TraceRecorder recorder_;
  const TaskGraph* graph_ = nullptr;
  TokenLedger ledger_;
  int steps_ = 0;
  std::vector<TraceEntry> global_trace_;
};

}  // namespace dagplan::detail
