#include "dagplan/graph_io.hpp"

#include "dagplan/errors.hpp"

namespace dagplan {

using nlohmann::json;

namespace {

NodeStatus status_from(const json& value) {
  auto status = parse_node_status(value.get<std::string>());
  if (!status) throw GraphError("unknown node status '" + value.get<std::string>() + "'");
  return *status;
}

}  // namespace

json plan_to_json(const Plan& plan) {
  json steps = json::array();
  for (const auto& s : plan.steps) {
    steps.push_back({{"index", s.index}, {"reasoning", s.reasoning}, {"step", s.step_text}});
  }
  return steps;
}

Plan plan_from_json(const json& doc) {
  Plan plan;
  for (const auto& s : doc) {
    plan.steps.push_back({s.at("index").get<int>(), s.at("reasoning").get<std::string>(),
                          s.at("step").get<std::string>()});
  }
  return plan;
}

json trace_entry_to_json(const TraceEntry& entry) {
  return {{"step", entry.step_index}, {"action", entry.action}, {"observation", entry.observation}};
}

TraceEntry trace_entry_from_json(const json& doc) {
  return {doc.at("step").get<std::int64_t>(), doc.at("action").get<std::string>(),
          doc.at("observation").get<std::string>()};
}

json outcome_to_json(const OutcomeSummary& outcome) {
  return {{"status", std::string(to_string(outcome.terminal_status))},
          {"summary", outcome.summary_text},
          {"key_observations", outcome.key_observations}};
}

OutcomeSummary outcome_from_json(const json& doc) {
  return {status_from(doc.at("status")), doc.at("summary").get<std::string>(),
          doc.at("key_observations").get<std::vector<std::string>>()};
}

json graph_to_json(const TaskGraph& graph) {
  json subgoals = json::array();
  for (const auto& [id, n] : graph.nodes()) {
    json deps = json::array();
    for (const auto& d : n.dependencies) deps.push_back(d.str());
    json trace = json::array();
    for (const auto& e : n.local_trace) trace.push_back(trace_entry_to_json(e));
    subgoals.push_back({{"id", id.str()},
                        {"description", n.description},
                        {"dependencies", std::move(deps)},
                        {"status", std::string(to_string(n.status))},
                        {"replan_count", n.replan_count},
                        {"outcome", n.outcome ? outcome_to_json(*n.outcome) : json(nullptr)},
                        {"plan", n.plan ? plan_to_json(*n.plan) : json(nullptr)},
                        {"local_trace", std::move(trace)}});
  }
  return {{"version", kGraphDocumentVersion},
          {"task_description", graph.task_description()},
          {"subgoals", std::move(subgoals)}};
}

TaskGraph graph_from_json(const json& doc) {
  try {
    const int version = doc.value("version", kGraphDocumentVersion);
    if (version != kGraphDocumentVersion) {
      throw GraphError("unsupported graph document version " + std::to_string(version));
    }
    TaskGraph graph(doc.value("task_description", std::string{}));
    for (const auto& entry : doc.at("subgoals")) {
      SubTaskNode node{NodeId(entry.at("id").get<std::string>()),
                       entry.at("description").get<std::string>(),
                       {},
                       NodeStatus::Pending,
                       std::nullopt,
                       {},
                       std::nullopt,
                       0};
      if (!entry.at("dependencies").is_array()) throw GraphError("node '" + node.id.str() + "': dependencies must be a list");
      for (const auto& d : entry.at("dependencies")) node.dependencies.insert(NodeId(d.get<std::string>()));
      if (entry.contains("status")) node.status = status_from(entry.at("status"));
      node.replan_count = entry.value("replan_count", 0);
      if (entry.contains("outcome") && !entry.at("outcome").is_null()) {
        node.outcome = outcome_from_json(entry.at("outcome"));
      }
      if (entry.contains("plan") && !entry.at("plan").is_null()) node.plan = plan_from_json(entry.at("plan"));
      if (entry.contains("local_trace")) {
        for (const auto& e : entry.at("local_trace")) node.local_trace.push_back(trace_entry_from_json(e));
      }
      graph.add_node(std::move(node));
    }
    return graph;
  } catch (const json::exception& e) {
    throw GraphError(std::string("malformed graph document: ") + e.what());
  }
}

}  // namespace dagplan
