#include "dagplan/engine.hpp"

#include <algorithm>

#include "dagplan/baselines.hpp"
#include "dagplan/errors.hpp"
#include "dagplan/graph_io.hpp"
#include "dagplan/parsers.hpp"
#include "run_state.hpp"

namespace dagplan {

using nlohmann::json;

RoleBackends RoleBackends::shared(std::shared_ptr<ModelBackend> backend) { return {backend, backend, backend}; }

ModelBackend& RoleBackends::for_role(Role role) const {
  const auto& ptr = role == Role::Supervisor ? supervisor : role == Role::Planner ? planner : executor;
  if (!ptr) throw ConfigError("no backend bound for role " + std::string(to_string(role)));
  return *ptr;
}

void RunConfig::validate() const {
  if (s_max < 1) throw ConfigError("s_max must be at least 1");
  if (max_replans_per_node < 0) throw ConfigError("max_replans_per_node must be nonnegative");
  if (parser_retry_budget < 0) throw ConfigError("parser_retry_budget must be nonnegative");
  if (history_cap < 2) throw ConfigError("history_cap must be at least 2");
  if (outcome_k < 0) throw ConfigError("outcome_k must be nonnegative");
  if (max_rounds < 1) throw ConfigError("max_rounds must be at least 1");
  if (!backends.supervisor || !backends.planner || !backends.executor) {
    throw ConfigError("every role needs a backend");
  }
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::Tdp: return "tdp";
    case Method::React: return "react";
    case Method::Cot: return "cot";
    case Method::PlanAndAct: return "plan-act";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view text) noexcept {
  for (Method m : {Method::Tdp, Method::React, Method::Cot, Method::PlanAndAct}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

std::string_view to_string(RunTerminal terminal) noexcept {
  return terminal == RunTerminal::Completed ? "Completed" : "Terminated";
}

TokenUsage RunReport::total_tokens() const {
  TokenUsage sum;
  for (const auto& [_, usage] : role_tokens) sum += usage;
  return sum;
}

json report_to_json(const RunReport& report) {
  json nodes = json::array();
  for (const auto& n : report.nodes) {
    nodes.push_back({{"id", n.id},
                     {"status", to_string(n.status)},
                     {"replan_count", n.replan_count},
                     {"trace_length", n.trace_length}});
  }
  json tokens = json::object();
  for (const auto& [role, usage] : report.role_tokens) {
    tokens[std::string(to_string(role))] = {{"prompt_tokens", usage.prompt_tokens},
                                            {"output_tokens", usage.output_tokens}};
  }
  return {{"run_id", report.run_id},
          {"task_id", report.task_id},
          {"method", to_string(report.method)},
          {"terminal", to_string(report.terminal)},
          {"reason", report.reason},
          {"steps_used", report.steps_used},
          {"s_max", report.s_max},
          {"nodes", nodes},
          {"role_tokens", tokens},
          {"env", env_metrics_to_json(report.env)}};
}

std::string default_run_id(Method method, const TaskInstance& task) {
  return std::string(to_string(method)) + "-" + task.id;
}

namespace {

class TdpController {
 public:
  explicit TdpController(detail::RunState& state) : st_(state) {}

  RunReport run();

 private:
  bool construct();
  void execute_node(const NodeId& id);
  void finish_node(const NodeId& id, NodeStatus status, const std::optional<std::string>& reason,
                   const std::string& fault = {});
  void revise(int round);
  bool all_sinks_completed() const;
  std::string history_of(const NodeId& id) const;

  detail::RunState& st_;
  TaskGraph graph_;
  std::string construction_fault_;
};

bool TdpController::construct() {
  auto parser = [&](std::string_view raw) {
    TaskGraph g;
    try {
      g = graph_from_subgoals(st_.task().query, parse_subgoals(raw));
    } catch (const GraphError& e) {
      throw ParseError(e.what(), std::string(raw));
    }
    const auto validation = validate_graph(g);
    if (!validation.ok()) throw ParseError("invalid task graph: " + validation.summary(), std::string(raw));
    return g;
  };
  try {
    auto result = st_.call(Role::Supervisor, TemplateName::Construct, st_.base_bindings(), parser, "global");
    graph_ = std::move(result.value);
    st_.watch(&graph_);
    st_.emit(EventKind::GraphConstructed, {{"attempts", result.attempts}, {"graph", graph_to_json(graph_)}});
    return true;
  } catch (const RoleFault& e) {
    construction_fault_ = e.what();
    return false;
  }
}

bool TdpController::all_sinks_completed() const {
  const auto sinks = graph_.sinks();
  return !sinks.empty() && std::all_of(sinks.begin(), sinks.end(), [&](const NodeId& id) {
    return graph_.node(id).status == NodeStatus::Completed;
  });
}

std::string TdpController::history_of(const NodeId& id) const {
  return assemble_history(graph_.node(id).local_trace, st_.config().history_cap);
}

void TdpController::finish_node(const NodeId& id, NodeStatus status, const std::optional<std::string>& reason,
                                const std::string& fault) {
  auto outcome = make_outcome(status, reason, graph_.node(id).local_trace,
                              static_cast<std::size_t>(st_.config().outcome_k));
  json payload = {{"node", id.str()},
                  {"from", to_string(NodeStatus::InProgress)},
                  {"to", to_string(status)},
                  {"outcome", outcome_to_json(outcome)}};
  if (!fault.empty()) payload["fault"] = fault;
  graph_.finish(id, std::move(outcome));
  st_.emit(EventKind::NodeStatus, std::move(payload));
}

void TdpController::execute_node(const NodeId& id) {
  const std::string scope = id.str();
  st_.emit(EventKind::NodeDispatched, {{"node", scope}, {"step", st_.steps()}});
  graph_.start(id);
  st_.emit(EventKind::NodeStatus, {{"node", scope},
                                              {"from", to_string(NodeStatus::Pending)},
                                              {"to", to_string(NodeStatus::InProgress)}});

  const std::string subgoal = render_node_subgoal(build_node_context(graph_, id));
  try {
    Bindings plan_bindings = st_.base_bindings();
    plan_bindings["nodes_description"] = subgoal;
    plan_bindings["history"] = history_of(id);
    graph_.set_plan(id, st_.call(Role::Planner, TemplateName::Plan, plan_bindings, parse_plan, scope).value);

    std::optional<std::string> guidance;
    while (true) {
      if (st_.env().done()) {
        finish_node(id, NodeStatus::Completed, "The environment reported the task finished.");
        return;
      }
      if (!st_.budget_left()) return;

      const std::string current_plan = render_plan(*graph_.node(id).plan);
      Bindings exec = st_.base_bindings();
      exec["subgoal"] = subgoal;
      exec["plan"] = current_plan;
      exec["history"] = history_of(id);
      if (guidance) exec["guidance"] = *guidance;
      guidance.reset();
      const std::string action = st_.call(Role::Executor, TemplateName::Execute, exec, parse_action, scope).value;

      const StepResult result = st_.step(action, scope);
      graph_.append_trace(id, {st_.steps() - 1, action, result.observation});
      if (result.done) {
        finish_node(id, NodeStatus::Completed, "The environment reported the task finished.");
        return;
      }

      Bindings eval = st_.base_bindings();
      eval["subgoal"] = subgoal;
      eval["current_plan"] = current_plan;
      eval["history"] = history_of(id);
      const Evaluation verdict = st_.call(Role::Supervisor, TemplateName::Evaluate, eval, parse_evaluation, scope).value;

      if (verdict.status == EvalStatus::Completed) {
        finish_node(id, NodeStatus::Completed, verdict.reason);
        return;
      }
      if (verdict.status == EvalStatus::Failed) {
        finish_node(id, NodeStatus::Failed, verdict.reason);
        return;
      }
      if (!verdict.need_replan) {
        guidance = verdict.reason;
        continue;
      }
      if (graph_.node(id).replan_count >= st_.config().max_replans_per_node) {
        finish_node(id, NodeStatus::Failed, verdict.reason, "replan budget exhausted");
        return;
      }
      Bindings replan = st_.base_bindings();
      replan["subgoal"] = subgoal;
      replan["current_plan"] = current_plan;
      replan["reason"] = verdict.reason.value_or("None");
      replan["history"] = history_of(id);
      const ReplanDecision decision =
          st_.call(Role::Planner, TemplateName::Replan, replan, parse_replan, scope).value;
      if (decision.replan) {
        graph_.replace_plan(id, *decision.new_plan);
        st_.emit(EventKind::Replan, {{"scope", scope},
                                                {"nodes", json::array({scope})},
                                                {"nodes_touched", 1},
                                                {"replan_count", graph_.node(id).replan_count},
                                                {"reason", verdict.reason.value_or("")},
                                                {"new_plan", plan_to_json(*decision.new_plan)}});
      }
    }
  } catch (const RoleFault& e) {
    finish_node(id, NodeStatus::Failed, std::nullopt, e.what());
  }
}

void TdpController::revise(int round) {
  Bindings b = st_.base_bindings();
  b["current_step"] = "round " + std::to_string(round) + ", " + std::to_string(st_.steps()) + " of " +
                      std::to_string(st_.config().s_max) + " environment steps used";
  b["history"] = assemble_history(st_.global_trace(), st_.config().history_cap);
  b["dag_state"] = render_dag_state(graph_);

  json payload = {{"round", round}};
  try {
    const RevisionDelta delta = st_.call(Role::Supervisor, TemplateName::Revise, b, parse_revision, "global").value;
    RevisionResult result = apply_revision(graph_, delta);
    auto ids = [](const std::vector<NodeId>& v) {
      json out = json::array();
      for (const auto& id : v) out.push_back(id.str());
      return out;
    };
    json updated = json::array();
    if (result.accepted) {
      for (const auto& u : delta.description_updates) updated.push_back(u.node_id.str());
    }
    payload.update({{"need_update", delta.need_update},
                    {"accepted", result.accepted},
                    {"changed", result.changed},
                    {"added", ids(result.added)},
                    {"removed", ids(result.removed)},
                    {"updated", updated},
                    {"rejection_reasons", result.rejection_reasons}});
    graph_ = std::move(result.graph);
  } catch (const RoleFault& e) {
    payload.update({{"need_update", false},
                    {"accepted", false},
                    {"changed", false},
                    {"added", json::array()},
                    {"removed", json::array()},
                    {"updated", json::array()},
                    {"rejection_reasons", json::array()},
                    {"fault", e.what()}});
  }
  st_.emit(EventKind::Revision, std::move(payload));
}

RunReport TdpController::run() {
  if (!construct()) {
    return st_.finish(RunTerminal::Terminated, "construction_fault", nullptr, {{"fault", construction_fault_}});
  }

  for (int round = 1;; ++round) {
    if (st_.env().done()) return st_.finish(RunTerminal::Completed, "done", &graph_);
    if (all_sinks_completed()) return st_.finish(RunTerminal::Completed, "all_sinks_completed", &graph_);
    if (!st_.budget_left()) return st_.finish(RunTerminal::Terminated, "step_budget", &graph_);
    if (round > st_.config().max_rounds) return st_.finish(RunTerminal::Terminated, "max_rounds", &graph_);

    const auto ready = ready_nodes(graph_);
    for (const auto& id : ready) {
      if (st_.env().done() || !st_.budget_left()) break;
      execute_node(id);
    }
    if (st_.env().done()) return st_.finish(RunTerminal::Completed, "done", &graph_);
    if (all_sinks_completed()) return st_.finish(RunTerminal::Completed, "all_sinks_completed", &graph_);
    if (!st_.budget_left()) return st_.finish(RunTerminal::Terminated, "step_budget", &graph_);

    revise(round);
    if (ready.empty() && ready_nodes(graph_).empty()) return st_.finish(RunTerminal::Terminated, "stall", &graph_);
  }
}

}  // namespace

RunReport run_task(const TaskInstance& task, Environment& env, const RunConfig& config, TraceSink* sink,
                   std::string run_id) {
  config.validate();
  env.reset(task);
  detail::RunState state(Method::Tdp, task, env, config, sink, std::move(run_id));
  return TdpController(state).run();
}

RunReport run_method(Method method, const TaskInstance& task, Environment& env, const RunConfig& config,
                     TraceSink* sink, std::string run_id) {
  switch (method) {
    case Method::Tdp: return run_task(task, env, config, sink, std::move(run_id));
    case Method::React: return run_react(task, env, config, sink, std::move(run_id));
    case Method::Cot: return run_cot(task, env, config, sink, std::move(run_id));
    case Method::PlanAndAct: return run_plan_and_act(task, env, config, sink, std::move(run_id));
  }
  throw ConfigError("unknown method");
}

}  // namespace dagplan
