#include "oracles.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <queue>

#include "dagplan/graph_io.hpp"

namespace dagplan::testing {

SubTaskNode make_node(const std::string& id, const std::set<std::string>& deps, NodeStatus status,
                      const std::string& description) {
  SubTaskNode node{NodeId(id), description.empty() ? "Sub-task " + id : description, {}, status, {}, {}, {}, 0};
  for (const auto& d : deps) node.dependencies.insert(NodeId(d));
  if (status == NodeStatus::Completed || status == NodeStatus::Failed) {
    node.outcome = OutcomeSummary{status, "Outcome of " + id, {}};
  }
  return node;
}

TaskGraph build_graph(const std::vector<std::string>& labels, const std::vector<std::pair<int, int>>& edges,
                      const std::vector<NodeStatus>& statuses) {
  std::vector<std::set<std::string>> deps(labels.size());
  for (const auto& [from, to] : edges) deps[to].insert(labels[from]);
  TaskGraph g("synthetic task");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    g.add_node(make_node(labels[i], deps[i], statuses.empty() ? NodeStatus::Pending : statuses[i]));
  }
  return g;
}

TaskGraph random_dag(std::mt19937_64& rng, int n, double p, bool random_statuses) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back("n" + std::to_string(i));
  std::shuffle(labels.begin(), labels.end(), rng);
  std::bernoulli_distribution edge(p);
  std::uniform_int_distribution<int> status(0, 3);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (edge(rng)) edges.emplace_back(i, j);
    }
  }
  std::vector<NodeStatus> statuses;
  for (int i = 0; i < n; ++i) statuses.push_back(random_statuses ? static_cast<NodeStatus>(status(rng)) : NodeStatus::Pending);
  return build_graph(labels, edges, statuses);
}

std::vector<NodeId> brute_force_ready(const TaskGraph& graph) {
  std::vector<NodeId> out;
  for (const auto& [id, node] : graph.nodes()) {
    if (node.status != NodeStatus::Pending) continue;
    bool ok = true;
    for (const auto& dep : node.dependencies) {
      if (!graph.contains(dep) || graph.node(dep).status != NodeStatus::Completed) ok = false;
    }
    if (ok) out.push_back(id);
  }
  std::sort(out.begin(), out.end(), [](const NodeId& a, const NodeId& b) { return a.str() < b.str(); });
  return out;
}

bool is_acyclic(const TaskGraph& graph) {
  std::map<std::string, int> indegree;
  std::map<std::string, std::vector<std::string>> users;
  for (const auto& [id, node] : graph.nodes()) {
    indegree[id.str()];
    for (const auto& dep : node.dependencies) {
      if (!graph.contains(dep)) continue;
      ++indegree[id.str()];
      users[dep.str()].push_back(id.str());
    }
  }
  std::queue<std::string> q;
  for (const auto& [id, d] : indegree) {
    if (d == 0) q.push(id);
  }
  std::size_t seen = 0;
  while (!q.empty()) {
    const auto id = q.front();
    q.pop();
    ++seen;
    for (const auto& u : users[id]) {
      if (--indegree[u] == 0) q.push(u);
    }
  }
  return seen == indegree.size();
}

bool has_sink(const TaskGraph& graph) {
  std::set<std::string> depended;
  for (const auto& [id, node] : graph.nodes()) {
    for (const auto& dep : node.dependencies) depended.insert(dep.str());
  }
  for (const auto& [id, node] : graph.nodes()) {
    if (!depended.count(id.str())) return true;
  }
  return false;
}

bool dependencies_resolve(const TaskGraph& graph) {
  for (const auto& [id, node] : graph.nodes()) {
    for (const auto& dep : node.dependencies) {
      if (!graph.contains(dep)) return false;
    }
  }
  return true;
}

std::string snapshot(const TaskGraph& graph) { return graph_to_json(graph).dump(); }

std::string node_snapshot(const TaskGraph& graph, const NodeId& id) {
  for (const auto& n : graph_to_json(graph).at("subgoals")) {
    if (n.at("id") == id.str()) return n.dump();
  }
  return "<absent>";
}

std::set<NodeId> ancestors(const TaskGraph& graph, const NodeId& id) {
  std::set<NodeId> out;
  std::vector<NodeId> stack(graph.node(id).dependencies.begin(), graph.node(id).dependencies.end());
  while (!stack.empty()) {
    NodeId cur = stack.back();
    stack.pop_back();
    if (!out.insert(cur).second || !graph.contains(cur)) continue;
    for (const auto& d : graph.node(cur).dependencies) stack.push_back(d);
  }
  return out;
}

std::size_t count_actions(const std::string& history) {
  std::size_t count = 0;
  for (std::size_t pos = history.find("Action: "); pos != std::string::npos; pos = history.find("Action: ", pos + 1)) {
    if (pos == 0 || history[pos - 1] == '\n') ++count;
  }
  return count;
}

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> oracle_sentences(const std::string& text) {
  std::string flat = text;
  std::replace(flat.begin(), flat.end(), '\n', ' ');
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const bool end_mark = flat[i] == '.' || flat[i] == '!' || flat[i] == '?';
    if (end_mark && (i + 1 == flat.size() || flat[i + 1] == ' ')) {
      if (auto s = strip(flat.substr(start, i + 1 - start)); !s.empty()) out.push_back(s);
      start = i + 1;
    }
  }
  if (auto s = strip(flat.substr(std::min(start, flat.size()))); !s.empty()) out.push_back(s);
  return out;
}

std::vector<std::string> oracle_lookup(const std::string& text, const std::string& keyword) {
  std::vector<std::string> out;
  for (const auto& s : oracle_sentences(text)) {
    if (lower(s).find(lower(keyword)) != std::string::npos) out.push_back(s);
  }
  return out;
}

bool oracle_condition(const nlohmann::json& goal, const TextLab::World& world) {
  const std::string type = goal.at("type");
  if (type == "agent_in") return world.agent_room == goal.at("room").get<std::string>();
  const TextLab::Object& o = world.objects.at(goal.at("object").get<std::string>());
  if (type == "holding") return o.location == "inventory";
  if (type == "inside") return o.location == goal.at("container").get<std::string>();
  if (type == "open") return o.open;
  if (type == "active") return o.active;
  if (type == "measured") return o.measured;
  if (type == "focused") return o.focused;
  return false;
}

std::string oracle_normalize(const std::string& text) {
  std::vector<std::string> words;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && cur != "a" && cur != "an" && cur != "the") words.push_back(cur);
    cur.clear();
  };
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isspace(u)) {
      flush();
    } else if (!std::ispunct(u)) {
      cur += static_cast<char>(std::tolower(u));
    }
  }
  flush();
  std::string out;
  for (const auto& w : words) out += (out.empty() ? "" : " ") + w;
  return out;
}

}  // namespace dagplan::testing
