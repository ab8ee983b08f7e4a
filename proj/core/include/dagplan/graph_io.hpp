#pragma once

#include <json.hpp>

#include "dagplan/graph.hpp"

namespace dagplan {

inline constexpr int kGraphDocumentVersion = 1;

/// Versioned JSON document: the construction schema's `subgoals` array
/// (id/description/dependencies) extended with status, outcome,
/// replan_count, plan and local_trace.
nlohmann::json graph_to_json(const TaskGraph& graph);

/// Throws GraphError on schema or per-node invariant violations. Graph-wide
/// invariants are left to validate_graph().
TaskGraph graph_from_json(const nlohmann::json& doc);

nlohmann::json plan_to_json(const Plan& plan);
Plan plan_from_json(const nlohmann::json& doc);

nlohmann::json trace_entry_to_json(const TraceEntry& entry);
TraceEntry trace_entry_from_json(const nlohmann::json& doc);

nlohmann::json outcome_to_json(const OutcomeSummary& outcome);
OutcomeSummary outcome_from_json(const nlohmann::json& doc);

}  // namespace dagplan
