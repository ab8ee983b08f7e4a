#include "dagplan/engine.hpp"
#include "dagplan/errors.hpp"

namespace dagplan {

namespace {

void append_entry(std::string& out, const TraceEntry& e) {
  if (!out.empty()) out += '\n';
  out += "Action: ";
  out += e.action;
  out += "\nObservation: ";
  out += e.observation;
}

}  // namespace

std::string assemble_history(const std::vector<TraceEntry>& trace, int cap) {
  if (cap < 2) throw ConfigError("history cap must be at least 2");
  if (trace.empty()) return "(no actions yet)";
  const auto limit = static_cast<std::size_t>(cap);
  std::string out;
  if (trace.size() <= limit) {
    for (const auto& e : trace) append_entry(out, e);
    return out;
  }
  const std::size_t tail = limit - 1;
  const std::size_t elided = trace.size() - 1 - tail;
  append_entry(out, trace.front());
  out += "\n…" + std::to_string(elided) + " steps elided…";
  for (std::size_t i = trace.size() - tail; i < trace.size(); ++i) append_entry(out, trace[i]);
  return out;
}

std::string render_node_subgoal(const NodeScopedContext& context) {
  std::string out = context.subgoal;
  if (context.dependency_outcomes.empty()) return out;
  out += "\nInformation from prerequisite nodes:";
  for (const auto& dep : context.dependency_outcomes) {
    out += "\n- [" + dep.id.str() + "] " + dep.outcome.summary_text;
  }
  return out;
}

}  // namespace dagplan
