#include "run_state.hpp"

namespace dagplan::detail {

using nlohmann::json;

RunState::RunState(Method method, const TaskInstance& task, Environment& env, const RunConfig& config,
                   TraceSink* sink, std::string run_id)
    : method_(method),
      task_(task),
      env_(env),
      config_(config),
      recorder_(run_id.empty() ? default_run_id(method, task) : std::move(run_id), sink, config.wall_clock) {}

Bindings RunState::base_bindings() const {
  return {{"task_description", task_.query}, {"admissible_commands", render_admissible_commands(env_)}};
}

const TraceEvent& RunState::emit(EventKind kind, json payload) {
  const TraceEvent& event = recorder_.emit(kind, std::move(payload));
  if (config_.on_event) config_.on_event(event, graph_);
  return event;
}

void RunState::record_attempt(const RoleAttempt& a, const std::string& scope) {
  ledger_.add(recorder_.run_id(), a.role, scope, a.completion.usage);
  json payload = {{"role", to_string(a.role)},
                  {"template", to_string(a.template_name)},
                  {"scope", scope},
                  {"attempt", a.attempt},
                  {"parsed", a.parsed},
                  {"prompt", a.prompt},
                  {"response", a.completion.text},
                  {"prompt_tokens", a.completion.usage.prompt_tokens},
                  {"output_tokens", a.completion.usage.output_tokens}};
  if (!a.parsed) payload["error"] = a.error;
  emit(EventKind::RoleCall, std::move(payload));
}

StepResult RunState::step(const std::string& action, const std::string& scope) {
  const int index = steps_;
  StepResult r = env_.step(action);
  ++steps_;
  global_trace_.push_back({index, action, r.observation});
  emit(EventKind::EnvStep, {{"step", index},
                                      {"scope", scope},
                                      {"action", action},
                                      {"observation", r.observation},
                                      {"reward_delta", r.reward_delta ? json(*r.reward_delta) : json(nullptr)},
                                      {"done", r.done}});
  return r;
}

RunReport RunState::finish(RunTerminal terminal, std::string reason, const TaskGraph* graph, json extra) {
  RunReport report;
  report.run_id = recorder_.run_id();
  report.task_id = task_.id;
  report.method = method_;
  report.terminal = terminal;
  report.reason = std::move(reason);
  report.steps_used = steps_;
  report.s_max = config_.s_max;
  report.env = env_.metrics();
  for (Role role : {Role::Supervisor, Role::Planner, Role::Executor}) {
    report.role_tokens[role] = ledger_.total_for(role);
  }
  if (graph) {
    report.graph = *graph;
    for (const auto& [id, node] : graph->nodes()) {
      report.nodes.push_back({id.str(), node.status, node.replan_count, node.local_trace.size()});
    }
  }

  json payload = report_to_json(report);
  payload["environment"] = task_.environment;
  payload["gold"] = task_.gold;
  if (graph) payload["graph"] = graph_to_json(*graph);
  for (auto& [k, v] : extra.items()) payload[k] = v;
  emit(EventKind::RunEnd, std::move(payload));
  report.events = recorder_.events();
  return report;
}

}  // namespace dagplan::detail
