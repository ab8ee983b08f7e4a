#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dagplan/plan.hpp"

namespace dagplan {

/// Identifier of a sub-task node. Never empty; stable for the graph's lifetime.
class NodeId {
 public:
  explicit NodeId(std::string value);

  const std::string& str() const noexcept { return value_; }

  friend bool operator==(const NodeId&, const NodeId&) = default;
  friend std::strong_ordering operator<=>(const NodeId& a, const NodeId& b) {
    return a.value_.compare(b.value_) <=> 0;
  }

 private:
  std::string value_;
};

enum class NodeStatus { Pending, InProgress, Completed, Failed };

std::string_view to_string(NodeStatus status) noexcept;
std::optional<NodeStatus> parse_node_status(std::string_view text) noexcept;
bool is_terminal(NodeStatus status) noexcept;

/// Pending->InProgress, InProgress->{InProgress, Completed, Failed}.
bool is_legal_transition(NodeStatus from, NodeStatus to) noexcept;

struct TraceEntry {
  std::int64_t step_index = 0;  // global environment-interaction index
  std::string action;
  std::string observation;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

/// What a finished node hands to the nodes that depend on it.
struct OutcomeSummary {
  NodeStatus terminal_status = NodeStatus::Completed;
  std::string summary_text;
  std::vector<std::string> key_observations;

  friend bool operator==(const OutcomeSummary&, const OutcomeSummary&) = default;
};

/// Builds an outcome from the evaluator's reason and the last `k` observations.
OutcomeSummary make_outcome(NodeStatus terminal_status, const std::optional<std::string>& reason,
                            const std::vector<TraceEntry>& trace, std::size_t k);

struct SubTaskNode {
  NodeId id;
  std::string description;
  std::set<NodeId> dependencies;
  NodeStatus status = NodeStatus::Pending;
  std::optional<Plan> plan;
  std::vector<TraceEntry> local_trace;
  std::optional<OutcomeSummary> outcome;
  int replan_count = 0;

  friend bool operator==(const SubTaskNode&, const SubTaskNode&) = default;
};

/// The task dependency graph. Mutators enforce the per-node invariants
/// (legal transitions, outcome iff terminal, increasing trace indices);
/// graph-wide invariants are checked by validate_graph().
class TaskGraph {
 public:
  TaskGraph() = default;
  explicit TaskGraph(std::string task_description);

  const std::string& task_description() const noexcept { return task_description_; }
  const std::map<NodeId, SubTaskNode>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }
  bool contains(const NodeId& id) const { return nodes_.count(id) != 0; }

  /// Throws GraphError when the id is unknown.
  const SubTaskNode& node(const NodeId& id) const;

  /// Throws GraphError on a duplicate id or when outcome presence does not
  /// match the node's status.
  void add_node(SubTaskNode node);
  void remove_node(const NodeId& id);

  void set_description(const NodeId& id, std::string description);
  void add_dependency(const NodeId& id, const NodeId& dependency);
  void remove_dependency(const NodeId& id, const NodeId& dependency);

  /// Pending -> InProgress.
  void start(const NodeId& id);
  /// InProgress -> outcome.terminal_status (Completed or Failed).
  void finish(const NodeId& id, OutcomeSummary outcome);
  void set_plan(const NodeId& id, Plan plan);
  /// Replaces the plan of an InProgress node and bumps its replan counter.
  void replace_plan(const NodeId& id, Plan plan);
  void append_trace(const NodeId& id, TraceEntry entry);

  /// Nodes no other node depends on, in id order.
  std::vector<NodeId> sinks() const;
  /// Direct dependents of `id`, in id order.
  std::vector<NodeId> dependents(const NodeId& id) const;

  friend bool operator==(const TaskGraph&, const TaskGraph&) = default;

 private:
  SubTaskNode& mutable_node(const NodeId& id);

  std::string task_description_;
  std::map<NodeId, SubTaskNode> nodes_;
};

enum class ViolationKind { Cycle, DanglingDependency, DuplicateId, NoSink, IdMismatch };

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::string message;
  std::vector<std::string> nodes;  // ids involved, e.g. the cycle members

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(ViolationKind kind) const noexcept;
  std::string summary() const;
};

ValidationResult validate_graph(const TaskGraph& graph);

/// Pending nodes whose every dependency is Completed, in lexicographic id order.
std::vector<NodeId> ready_nodes(const TaskGraph& graph);

struct DependencyOutcome {
  NodeId id;
  OutcomeSummary outcome;

  friend bool operator==(const DependencyOutcome&, const DependencyOutcome&) = default;
};

/// Everything the planner and executor may see for one node.
struct NodeScopedContext {
  NodeId node;
  std::string subgoal;
  std::vector<DependencyOutcome> dependency_outcomes;  // dependency-id order
  std::vector<TraceEntry> local_trace;
  std::optional<std::string> guidance;

  friend bool operator==(const NodeScopedContext&, const NodeScopedContext&) = default;
};

/// Throws SchedulingFault when a dependency has not completed.
NodeScopedContext build_node_context(const TaskGraph& graph, const NodeId& id,
                                     std::optional<std::string> guidance = std::nullopt);

struct DescriptionUpdate {
  NodeId node_id;
  std::string new_description;

  friend bool operator==(const DescriptionUpdate&, const DescriptionUpdate&) = default;
};

struct NewNodeSpec {
  std::optional<NodeId> id;
  std::string description;
  std::vector<NodeId> dependencies;
  std::vector<NodeId> dependents;

  friend bool operator==(const NewNodeSpec&, const NewNodeSpec&) = default;
};

/// Parsed self-revision output.
struct RevisionDelta {
  std::string thought;
  bool need_update = false;
  std::vector<DescriptionUpdate> description_updates;
  std::vector<NewNodeSpec> new_nodes;
  std::vector<NodeId> remove_nodes;

  friend bool operator==(const RevisionDelta&, const RevisionDelta&) = default;
};

struct RevisionResult {
  TaskGraph graph;  // the revised graph, or the untouched input when rejected
  bool accepted = true;
  bool changed = false;
  std::vector<std::string> rejection_reasons;
  std::vector<NodeId> added;
  std::vector<NodeId> removed;
};

/// Applies a delta atomically: either every edit lands and the result
/// validates, or the original graph comes back with the reasons.
RevisionResult apply_revision(const TaskGraph& graph, const RevisionDelta& delta);

/// `node_<n+1>` where n is the largest numeric suffix among existing ids.
NodeId next_generated_id(const TaskGraph& graph);

/// One line per node in id order, for the revision prompt.
std::string render_dag_state(const TaskGraph& graph);

}  // namespace dagplan

template <>
struct std::hash<dagplan::NodeId> {
  std::size_t operator()(const dagplan::NodeId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
