#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dagplan/backend.hpp"
#include "dagplan/environment.hpp"
#include "dagplan/graph.hpp"
#include "dagplan/prompt.hpp"
#include "dagplan/telemetry.hpp"

namespace dagplan {

struct RoleBackends {
  std::shared_ptr<ModelBackend> supervisor;
  std::shared_ptr<ModelBackend> planner;
  std::shared_ptr<ModelBackend> executor;

  /// All three roles served by one backend.
  static RoleBackends shared(std::shared_ptr<ModelBackend> backend);
  ModelBackend& for_role(Role role) const;
};

struct RunConfig {
  int s_max = 30;
  int max_replans_per_node = 3;
  int parser_retry_budget = 2;
  int history_cap = 30;
  int outcome_k = 3;
  int max_rounds = 64;  // outer-loop guard on top of the stall rule
  bool wall_clock = false;
  RoleBackends backends;
  TemplateSet templates = TemplateSet::defaults();
  /// Called after every emitted event with the current graph (null before
  /// construction and for the baselines).
  std::function<void(const TraceEvent&, const TaskGraph*)> on_event;

  /// Throws ConfigError on out-of-range values or a missing backend.
  void validate() const;
};

enum class Method { Tdp, React, Cot, PlanAndAct };

std::string_view to_string(Method method) noexcept;
std::optional<Method> parse_method(std::string_view text) noexcept;

enum class RunTerminal { Completed, Terminated };

std::string_view to_string(RunTerminal terminal) noexcept;

struct NodeRecord {
  std::string id;
  NodeStatus status = NodeStatus::Pending;
  int replan_count = 0;
  std::size_t trace_length = 0;

  friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

struct RunReport {
  std::string run_id;
  std::string task_id;
  Method method = Method::Tdp;
  RunTerminal terminal = RunTerminal::Terminated;
  std::string reason;  // done, all_sinks_completed, step_budget, stall, ...
  int steps_used = 0;
  int s_max = 0;
  std::vector<NodeRecord> nodes;
  std::map<Role, TokenUsage> role_tokens;
  EnvMetrics env;
  std::optional<TaskGraph> graph;
  std::vector<TraceEvent> events;

  TokenUsage total_tokens() const;
};

/// Summary document (everything except the event list and graph).
nlohmann::json report_to_json(const RunReport& report);

/// "Action: ...\nObservation: ..." pairs. Past `cap` entries the first
/// entry is kept, then a marker with the number elided, then the last
/// cap-1 entries. Throws ConfigError when cap < 2.
std::string assemble_history(const std::vector<TraceEntry>& trace, int cap);

/// Subgoal text for node-scoped prompts: the description followed by the
/// outcomes of the direct dependencies.
std::string render_node_subgoal(const NodeScopedContext& context);

/// Runs one task with the dependency-graph controller. The environment is
/// reset here. Events go to `sink` when given and are always kept in the
/// report.
RunReport run_task(const TaskInstance& task, Environment& env, const RunConfig& config, TraceSink* sink = nullptr,
                   std::string run_id = {});

/// Dispatches to run_task or one of the baseline controllers.
RunReport run_method(Method method, const TaskInstance& task, Environment& env, const RunConfig& config,
                     TraceSink* sink = nullptr, std::string run_id = {});

/// Default run id: "<method>-<task id>".
std::string default_run_id(Method method, const TaskInstance& task);

}  // namespace dagplan
