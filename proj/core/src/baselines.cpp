#include "dagplan/baselines.hpp"

#include "dagplan/graph_io.hpp"
#include "dagplan/parsers.hpp"
#include "run_state.hpp"

namespace dagplan {

using nlohmann::json;

namespace {

constexpr const char* kGlobal = "global";

// Full history: a cap larger than any possible trace.
std::string full_history(const detail::RunState& st) {
  return assemble_history(st.global_trace(), static_cast<int>(st.global_trace().size()) + 2);
}

RunReport budget_or(detail::RunState& st, const char* otherwise) {
  if (st.env().done()) return st.finish(RunTerminal::Completed, "done");
  if (!st.budget_left()) return st.finish(RunTerminal::Terminated, "step_budget");
  return st.finish(RunTerminal::Terminated, otherwise);
}

}  // namespace

RunReport run_react(const TaskInstance& task, Environment& env, const RunConfig& config, TraceSink* sink,
                    std::string run_id) {
  config.validate();
  env.reset(task);
  detail::RunState st(Method::React, task, env, config, sink, std::move(run_id));
  try {
    while (!env.done() && st.budget_left()) {
      Bindings b = st.base_bindings();
      b["history"] = full_history(st);
      const auto action = st.call(Role::Executor, TemplateName::React, b, parse_react_action, kGlobal).value;
      st.step(action, kGlobal);
    }
  } catch (const RoleFault& e) {
    return st.finish(RunTerminal::Terminated, "role_fault", nullptr, {{"fault", e.what()}});
  }
  return budget_or(st, "step_budget");
}

RunReport run_cot(const TaskInstance& task, Environment& env, const RunConfig& config, TraceSink* sink,
                  std::string run_id) {
  config.validate();
  env.reset(task);
  detail::RunState st(Method::Cot, task, env, config, sink, std::move(run_id));
  try {
    Bindings pb = st.base_bindings();
    pb["nodes_description"] = task.query;
    pb["history"] = full_history(st);
    const Plan plan = st.call(Role::Planner, TemplateName::Plan, pb, parse_plan, kGlobal).value;
    const std::string rendered = render_plan(plan);
    for (std::size_t i = 0; i < plan.steps.size() && !env.done() && st.budget_left(); ++i) {
      Bindings b = st.base_bindings();
      b["subgoal"] = task.query;
      b["plan"] = rendered;
      b["history"] = full_history(st);
      const auto action = st.call(Role::Executor, TemplateName::Execute, b, parse_action, kGlobal).value;
      st.step(action, kGlobal);
    }
  } catch (const RoleFault& e) {
    return st.finish(RunTerminal::Terminated, "role_fault", nullptr, {{"fault", e.what()}});
  }
  return budget_or(st, "plan_exhausted");
}

RunReport run_plan_and_act(const TaskInstance& task, Environment& env, const RunConfig& config, TraceSink* sink,
                           std::string run_id) {
  config.validate();
  env.reset(task);
  detail::RunState st(Method::PlanAndAct, task, env, config, sink, std::move(run_id));
  int replans = 0;
  try {
    Bindings pb = st.base_bindings();
    pb["nodes_description"] = task.query;
    pb["history"] = full_history(st);
    Plan plan = st.call(Role::Planner, TemplateName::Plan, pb, parse_plan, kGlobal).value;

    std::optional<std::string> guidance;
    while (!env.done() && st.budget_left()) {
      const std::string current_plan = render_plan(plan);
      Bindings b = st.base_bindings();
      b["subgoal"] = task.query;
      b["plan"] = current_plan;
      b["history"] = full_history(st);
      if (guidance) b["guidance"] = *guidance;
      guidance.reset();
      const auto action = st.call(Role::Executor, TemplateName::Execute, b, parse_action, kGlobal).value;
      if (st.step(action, kGlobal).done) break;

      Bindings eb = st.base_bindings();
      eb["subgoal"] = task.query;
      eb["current_plan"] = current_plan;
      eb["history"] = full_history(st);
      const Evaluation verdict = st.call(Role::Supervisor, TemplateName::Evaluate, eb, parse_evaluation, kGlobal).value;
      const bool deviation = verdict.need_replan || verdict.status == EvalStatus::Failed;
      if (!deviation) {
        if (verdict.status == EvalStatus::NeedsMoreSteps) guidance = verdict.reason;
        continue;
      }
      if (replans >= config.max_replans_per_node) {
        return st.finish(RunTerminal::Terminated, "replan_budget", nullptr, {{"replans", replans}});
      }
      Bindings rb = st.base_bindings();
      rb["subgoal"] = task.query;
      rb["current_plan"] = current_plan;
      rb["reason"] = verdict.reason.value_or("None");
      rb["history"] = full_history(st);
      const ReplanDecision decision = st.call(Role::Planner, TemplateName::Replan, rb, parse_replan, kGlobal).value;
      if (decision.replan) {
        ++replans;
        const auto touched = plan.steps.size();
        plan = *decision.new_plan;
        st.emit(EventKind::Replan, {{"scope", kGlobal},
                                               {"nodes", json::array()},
                                               {"nodes_touched", touched},
                                               {"replan_count", replans},
                                               {"reason", verdict.reason.value_or("")},
                                               {"new_plan", plan_to_json(plan)}});
      }
    }
  } catch (const RoleFault& e) {
    return st.finish(RunTerminal::Terminated, "role_fault", nullptr, {{"fault", e.what()}});
  }
  return budget_or(st, "step_budget");
}

}  // namespace dagplan
