#pragma once

// Reference implementations written independently of the library code, used
// to compute expected values in tests.

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dagplan/graph.hpp"
#include "dagplan/mocks.hpp"

namespace dagplan::testing {

SubTaskNode make_node(const std::string& id, const std::set<std::string>& deps,
                      NodeStatus status = NodeStatus::Pending, const std::string& description = "");

/// Nodes named by index (after `labels`), with edges i -> j meaning j depends on i.
TaskGraph build_graph(const std::vector<std::string>& labels, const std::vector<std::pair<int, int>>& edges,
                      const std::vector<NodeStatus>& statuses);

/// Random DAG on n nodes: a random topological order, then each forward pair
/// is an edge with probability p. Labels are shuffled "n<k>" names.
TaskGraph random_dag(std::mt19937_64& rng, int n, double p, bool random_statuses);

/// Ready set by the literal definition, in sorted order.
std::vector<NodeId> brute_force_ready(const TaskGraph& graph);

/// Kahn's algorithm; dangling dependencies are ignored.
bool is_acyclic(const TaskGraph& graph);
/// Some node is not depended upon by any other node.
bool has_sink(const TaskGraph& graph);
bool dependencies_resolve(const TaskGraph& graph);

/// Byte-level serialisation of the whole graph / of one node.
std::string snapshot(const TaskGraph& graph);
std::string node_snapshot(const TaskGraph& graph, const NodeId& id);

/// Transitive dependencies of `id`.
std::set<NodeId> ancestors(const TaskGraph& graph, const NodeId& id);

/// Number of "Action: " lines in a rendered history.
std::size_t count_actions(const std::string& history);

/// Sentences of an article: runs of text ending in . ! or ?, newlines as spaces.
std::vector<std::string> oracle_sentences(const std::string& text);
/// Sentences containing `keyword`, case-insensitively, in document order.
std::vector<std::string> oracle_lookup(const std::string& text, const std::string& keyword);

/// Goal condition check over a TextLab world, reimplemented.
bool oracle_condition(const nlohmann::json& goal, const TextLab::World& world);

/// Lowercase, drop punctuation, drop a/an/the, single spaces.
std::string oracle_normalize(const std::string& text);

}  // namespace dagplan::testing
