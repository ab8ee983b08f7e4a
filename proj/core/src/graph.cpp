#include "dagplan/graph.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

#include "dagplan/errors.hpp"

namespace dagplan {

NodeId::NodeId(std::string value) : value_(std::move(value)) {
  if (value_.empty()) {
    throw GraphError("node id must not be empty");
  }
}

std::string_view to_string(NodeStatus status) noexcept {
  switch (status) {
    case NodeStatus::Pending:
      return "pending";
    case NodeStatus::InProgress:
      return "in_progress";
    case NodeStatus::Completed:
      return "completed";
    case NodeStatus::Failed:
      return "failed";
  }
  return "unknown";
}

std::optional<NodeStatus> parse_node_status(std::string_view text) noexcept {
  for (auto s : {NodeStatus::Pending, NodeStatus::InProgress, NodeStatus::Completed,
                 NodeStatus::Failed}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

bool is_terminal(NodeStatus status) noexcept {
  return status == NodeStatus::Completed || status == NodeStatus::Failed;
}

bool is_legal_transition(NodeStatus from, NodeStatus to) noexcept {
  switch (from) {
    case NodeStatus::Pending:
      return to == NodeStatus::InProgress;
    case NodeStatus::InProgress:
      return to != NodeStatus::Pending;
    case NodeStatus::Completed:
    case NodeStatus::Failed:
      return false;
  }
  return false;
}

OutcomeSummary make_outcome(NodeStatus terminal_status, const std::optional<std::string>& reason,
                            const std::vector<TraceEntry>& trace, std::size_t k) {
  OutcomeSummary out;
  out.terminal_status = terminal_status;
  const std::size_t first = trace.size() > k ? trace.size() - k : 0;
  for (std::size_t i = first; i < trace.size(); ++i) {
    out.key_observations.push_back(trace[i].observation);
  }

  std::string text;
  if (reason && !reason->empty()) text = *reason;
  if (!out.key_observations.empty()) {
    if (!text.empty()) text += "\n";
    text += "Key observations:";
    for (const auto& obs : out.key_observations) {
      text += "\n- ";
      text += obs;
    }
  }
  if (text.empty()) {
    text = terminal_status == NodeStatus::Completed ? "Completed." : "Failed.";
  }
  out.summary_text = std::move(text);
  return out;
}

TaskGraph::TaskGraph(std::string task_description)
    : task_description_(std::move(task_description)) {}

const SubTaskNode& TaskGraph::node(const NodeId& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw GraphError("unknown node '" + id.str() + "'");
  return it->second;
}

SubTaskNode& TaskGraph::mutable_node(const NodeId& id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw GraphError("unknown node '" + id.str() + "'");
  return it->second;
}

void TaskGraph::add_node(SubTaskNode node) {
  if (nodes_.count(node.id) != 0) {
    throw GraphError("duplicate node id '" + node.id.str() + "'");
  }
  if (node.outcome.has_value() != is_terminal(node.status)) {
    throw GraphError("node '" + node.id.str() + "': outcome must be present iff status is terminal");
  }
  if (node.replan_count < 0) {
    throw GraphError("node '" + node.id.str() + "': negative replan count");
  }
  for (std::size_t i = 1; i < node.local_trace.size(); ++i) {
    if (node.local_trace[i].step_index <= node.local_trace[i - 1].step_index) {
      throw GraphError("node '" + node.id.str() + "': trace step indices must increase");
    }
  }
  NodeId key = node.id;
  nodes_.emplace(std::move(key), std::move(node));
}

void TaskGraph::remove_node(const NodeId& id) {
  if (nodes_.erase(id) == 0) throw GraphError("unknown node '" + id.str() + "'");
  for (auto& [_, n] : nodes_) n.dependencies.erase(id);
}

void TaskGraph::set_description(const NodeId& id, std::string description) {
  auto& n = mutable_node(id);
  if (is_terminal(n.status)) {
    throw GraphError("cannot update description of terminal node '" + id.str() + "'");
  }
  n.description = std::move(description);
}

void TaskGraph::add_dependency(const NodeId& id, const NodeId& dependency) {
  mutable_node(id).dependencies.insert(dependency);
}

void TaskGraph::remove_dependency(const NodeId& id, const NodeId& dependency) {
  mutable_node(id).dependencies.erase(dependency);
}

void TaskGraph::start(const NodeId& id) {
  auto& n = mutable_node(id);
  if (n.status != NodeStatus::Pending) {
    throw GraphError("illegal transition " + std::string(to_string(n.status)) + " -> in_progress for '" +
                     id.str() + "'");
  }
  n.status = NodeStatus::InProgress;
}

void TaskGraph::finish(const NodeId& id, OutcomeSummary outcome) {
  auto& n = mutable_node(id);
  if (!is_terminal(outcome.terminal_status) || !is_legal_transition(n.status, outcome.terminal_status)) {
    throw GraphError("illegal transition " + std::string(to_string(n.status)) + " -> " +
                     std::string(to_string(outcome.terminal_status)) + " for '" + id.str() + "'");
  }
  if (outcome.terminal_status == NodeStatus::Completed && outcome.summary_text.empty()) {
    throw GraphError("completed node '" + id.str() + "' needs a nonempty summary");
  }
  n.status = outcome.terminal_status;
  n.outcome = std::move(outcome);
}

void TaskGraph::set_plan(const NodeId& id, Plan plan) { mutable_node(id).plan = std::move(plan); }

void TaskGraph::replace_plan(const NodeId& id, Plan plan) {
  auto& n = mutable_node(id);
  if (n.status != NodeStatus::InProgress) {
    throw GraphError("replanning requires an in-progress node, '" + id.str() + "' is " +
                     std::string(to_string(n.status)));
  }
  n.plan = std::move(plan);
  ++n.replan_count;
}

void TaskGraph::append_trace(const NodeId& id, TraceEntry entry) {
  auto& n = mutable_node(id);
  if (n.status != NodeStatus::InProgress) {
    throw GraphError("trace entries belong to in-progress nodes only ('" + id.str() + "')");
  }
  if (!n.local_trace.empty() && entry.step_index <= n.local_trace.back().step_index) {
    throw GraphError("trace step indices must increase ('" + id.str() + "')");
  }
  n.local_trace.push_back(std::move(entry));
}

std::vector<NodeId> TaskGraph::sinks() const {
  std::set<NodeId> depended_on;
  for (const auto& [_, n] : nodes_) depended_on.insert(n.dependencies.begin(), n.dependencies.end());
  std::vector<NodeId> out;
  for (const auto& [id, _] : nodes_) {
    if (depended_on.count(id) == 0) out.push_back(id);
  }
  return out;
}

std::vector<NodeId> TaskGraph::dependents(const NodeId& id) const {
  std::vector<NodeId> out;
  for (const auto& [other, n] : nodes_) {
    if (n.dependencies.count(id) != 0) out.push_back(other);
  }
  return out;
}

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::Cycle:
      return "cycle";
    case ViolationKind::DanglingDependency:
      return "dangling_dependency";
    case ViolationKind::DuplicateId:
      return "duplicate_id";
    case ViolationKind::NoSink:
      return "no_sink";
    case ViolationKind::IdMismatch:
      return "id_mismatch";
  }
  return "unknown";
}

bool ValidationResult::has(ViolationKind kind) const noexcept {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

std::string ValidationResult::summary() const {
  if (ok()) return "ok";
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

namespace {

// Tarjan's strongly connected components over resolved dependency edges.
class CycleFinder {
 public:
  explicit CycleFinder(const TaskGraph& graph) : graph_(graph) {}

  std::vector<std::vector<std::string>> run() {
    for (const auto& [id, _] : graph_.nodes()) {
      if (index_.count(id.str()) == 0) visit(id);
    }
    return cycles_;
  }

 private:
  void visit(const NodeId& id) {
    const std::string& key = id.str();
    index_[key] = lowlink_[key] = counter_++;
    stack_.push_back(key);
    on_stack_.insert(key);

    for (const auto& dep : graph_.node(id).dependencies) {
      if (!graph_.contains(dep)) continue;
      if (index_.count(dep.str()) == 0) {
        visit(dep);
        lowlink_[key] = std::min(lowlink_[key], lowlink_[dep.str()]);
      } else if (on_stack_.count(dep.str()) != 0) {
        lowlink_[key] = std::min(lowlink_[key], index_[dep.str()]);
      }
    }

    if (lowlink_[key] == index_[key]) {
      std::vector<std::string> component;
      std::string member;
      do {
        member = stack_.back();
        stack_.pop_back();
        on_stack_.erase(member);
        component.push_back(member);
      } while (member != key);
      const bool self_loop = graph_.node(id).dependencies.count(id) != 0;
      if (component.size() > 1 || self_loop) {
        std::sort(component.begin(), component.end());
        cycles_.push_back(std::move(component));
      }
    }
  }

  const TaskGraph& graph_;
  int counter_ = 0;
  std::map<std::string, int> index_;
  std::map<std::string, int> lowlink_;
  std::vector<std::string> stack_;
  std::set<std::string> on_stack_;
  std::vector<std::vector<std::string>> cycles_;
};

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

ValidationResult validate_graph(const TaskGraph& graph) {
  ValidationResult result;

  for (const auto& [key, n] : graph.nodes()) {
    if (!(key == n.id)) {
      result.violations.push_back({ViolationKind::IdMismatch,
                                   "node stored under '" + key.str() + "' carries id '" + n.id.str() + "'",
                                   {key.str(), n.id.str()}});
    }
    for (const auto& dep : n.dependencies) {
      if (!graph.contains(dep)) {
        result.violations.push_back({ViolationKind::DanglingDependency,
                                     "node '" + key.str() + "' depends on unknown node '" + dep.str() + "'",
                                     {key.str(), dep.str()}});
      }
    }
  }

  for (auto& cycle : CycleFinder(graph).run()) {
    result.violations.push_back(
        {ViolationKind::Cycle, "cycle among {" + join(cycle, ", ") + "}", std::move(cycle)});
  }

  if (graph.sinks().empty()) {
    result.violations.push_back(
        {ViolationKind::NoSink, "graph has no sink node (at least one sink node is required)", {}});
  }
  return result;
}

std::vector<NodeId> ready_nodes(const TaskGraph& graph) {
  std::vector<NodeId> out;
  for (const auto& [id, n] : graph.nodes()) {
    if (n.status != NodeStatus::Pending) continue;
    const bool satisfied = std::all_of(n.dependencies.begin(), n.dependencies.end(), [&](const NodeId& d) {
      return graph.contains(d) && graph.node(d).status == NodeStatus::Completed;
    });
    if (satisfied) out.push_back(id);
  }
  return out;
}

NodeScopedContext build_node_context(const TaskGraph& graph, const NodeId& id,
                                     std::optional<std::string> guidance) {
  const SubTaskNode& n = graph.node(id);
  NodeScopedContext ctx{n.id, n.description, {}, n.local_trace, std::move(guidance)};
  for (const auto& dep : n.dependencies) {
    if (!graph.contains(dep) || graph.node(dep).status != NodeStatus::Completed) {
      throw SchedulingFault("node '" + id.str() + "' dispatched before dependency '" + dep.str() +
                            "' completed");
    }
    ctx.dependency_outcomes.push_back({dep, *graph.node(dep).outcome});
  }
  return ctx;
}

NodeId next_generated_id(const TaskGraph& graph) {
  long long max_suffix = 0;
  for (const auto& [id, _] : graph.nodes()) {
    const std::string& s = id.str();
    std::size_t pos = s.size();
    while (pos > 0 && std::isdigit(static_cast<unsigned char>(s[pos - 1]))) --pos;
    if (pos == s.size() || s.size() - pos > 15) continue;
    max_suffix = std::max(max_suffix, std::stoll(s.substr(pos)));
  }
  NodeId candidate("node_" + std::to_string(max_suffix + 1));
  while (graph.contains(candidate)) {
    candidate = NodeId("node_" + std::to_string(++max_suffix + 1));
  }
  return candidate;
}

namespace {

// A generated id unused in both the input graph and the graph under edit, so
// ids of nodes removed by the same delta are never handed out again.
NodeId fresh_id(const TaskGraph& original, const TaskGraph& edited) {
  NodeId a = next_generated_id(original);
  NodeId b = next_generated_id(edited);
  auto suffix = [](const NodeId& id) { return std::stoll(id.str().substr(5)); };
  return suffix(a) > suffix(b) ? a : b;
}

}  // namespace

RevisionResult apply_revision(const TaskGraph& graph, const RevisionDelta& delta) {
  RevisionResult result{graph, true, false, {}, {}, {}};
  if (!delta.need_update) return result;

  TaskGraph next = graph;
  std::vector<std::string> reasons;

  for (const auto& upd : delta.description_updates) {
    if (!next.contains(upd.node_id)) {
      reasons.push_back("description update targets unknown node '" + upd.node_id.str() + "'");
    } else if (is_terminal(next.node(upd.node_id).status)) {
      reasons.push_back("description update targets terminal node '" + upd.node_id.str() + "' (" +
                        std::string(to_string(next.node(upd.node_id).status)) + ")");
    } else if (upd.new_description.empty()) {
      reasons.push_back("description update for '" + upd.node_id.str() + "' is empty");
    } else {
      next.set_description(upd.node_id, upd.new_description);
    }
  }

  for (const auto& id : delta.remove_nodes) {
    if (!next.contains(id)) {
      reasons.push_back("remove targets unknown node '" + id.str() + "'");
      continue;
    }
    next.remove_node(id);
    result.removed.push_back(id);
  }

  // Insert first, wire afterwards, so new nodes may reference each other.
  std::vector<NodeId> inserted;
  for (const auto& spec : delta.new_nodes) {
    NodeId id = spec.id ? *spec.id : fresh_id(graph, next);
    if (next.contains(id) || graph.contains(id)) {
      reasons.push_back("new node duplicates existing id '" + id.str() + "'");
      inserted.push_back(id);
      continue;
    }
    if (spec.description.empty()) {
      reasons.push_back("new node '" + id.str() + "' has an empty description");
    }
    next.add_node(SubTaskNode{id, spec.description, {}, NodeStatus::Pending, std::nullopt, {}, std::nullopt, 0});
    inserted.push_back(id);
  }
  for (std::size_t i = 0; i < delta.new_nodes.size() && reasons.empty(); ++i) {
    const auto& spec = delta.new_nodes[i];
    const NodeId& id = inserted[i];
    for (const auto& dep : spec.dependencies) {
      if (!next.contains(dep)) {
        reasons.push_back("new node '" + id.str() + "' depends on unknown node '" + dep.str() + "'");
        continue;
      }
      next.add_dependency(id, dep);
    }
    for (const auto& dependent : spec.dependents) {
      if (!next.contains(dependent)) {
        reasons.push_back("new node '" + id.str() + "' lists unknown dependent '" + dependent.str() + "'");
        continue;
      }
      if (is_terminal(next.node(dependent).status)) {
        reasons.push_back("new node '" + id.str() + "' lists terminal node '" + dependent.str() +
                          "' as dependent");
        continue;
      }
      next.add_dependency(dependent, id);
    }
  }

  if (reasons.empty()) {
    auto validation = validate_graph(next);
    for (const auto& v : validation.violations) reasons.push_back(v.message);
  }

  if (!reasons.empty()) {
    result.accepted = false;
    result.rejection_reasons = std::move(reasons);
    result.removed.clear();
    return result;
  }

  result.changed = !(next == graph);
  result.added = std::move(inserted);
  result.graph = std::move(next);
  return result;
}

std::string render_dag_state(const TaskGraph& graph) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [id, n] : graph.nodes()) {
    if (!first) os << '\n';
    first = false;
    os << "- id: " << id.str() << " | status: " << to_string(n.status) << " | dependencies: [";
    bool first_dep = true;
    for (const auto& dep : n.dependencies) {
      if (!first_dep) os << ", ";
      first_dep = false;
      os << dep.str();
    }
    os << "] | description: " << n.description;
  }
  return os.str();
}

}  // namespace dagplan
