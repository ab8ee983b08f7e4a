#pragma once

#include "dagplan/engine.hpp"

namespace dagplan {

// Reference controllers sharing backends, budgets and telemetry with
// run_task. Each one sees the full, uncapped interaction history.

/// Single Executor role; every prompt carries the task and the whole history.
RunReport run_react(const TaskInstance& task, Environment& env, const RunConfig& config, TraceSink* sink = nullptr,
                    std::string run_id = {});

/// One planning call, then one action per plan step. Never replans.
RunReport run_cot(const TaskInstance& task, Environment& env, const RunConfig& config, TraceSink* sink = nullptr,
                  std::string run_id = {});

/// A global plan, step-wise execution and evaluation, and whole-plan
/// regeneration on a flagged deviation. `max_replans_per_node` is the run-wide
/// replan cap here.
RunReport run_plan_and_act(const TaskInstance& task, Environment& env, const RunConfig& config,
                           TraceSink* sink = nullptr, std::string run_id = {});

}  // namespace dagplan
