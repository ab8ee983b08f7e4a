#include "dagplan/parsers.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>
#include <sstream>

#include "dagplan/errors.hpp"

namespace dagplan {

using nlohmann::json;

std::string trim(std::string_view text) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

namespace {

std::string rtrim(std::string_view text) {
  std::size_t e = text.size();
  while (e > 0 && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(0, e));
}

[[noreturn]] void fail(const std::string& what, std::string_view raw) {
  throw ParseError(what, std::string(raw));
}

// End index (inclusive) of the balanced object starting at `start`, if any.
std::optional<std::size_t> balanced_end(std::string_view text, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i;
    }
  }
  return std::nullopt;
}

const json& require(const json& obj, const char* key, std::string_view raw) {
  if (!obj.is_object() || !obj.contains(key)) fail(std::string("missing required field \"") + key + "\"", raw);
  return obj.at(key);
}

bool require_bool(const json& obj, const char* key, std::string_view raw) {
  const json& v = require(obj, key, raw);
  if (!v.is_boolean()) fail(std::string("field \"") + key + "\" must be true or false", raw);
  return v.get<bool>();
}

std::string require_string(const json& obj, const char* key, std::string_view raw, bool nonempty) {
  const json& v = require(obj, key, raw);
  if (!v.is_string()) fail(std::string("field \"") + key + "\" must be a string", raw);
  std::string s = v.get<std::string>();
  if (nonempty && trim(s).empty()) fail(std::string("field \"") + key + "\" must not be empty", raw);
  return s;
}

std::optional<std::string> optional_string(const json& obj, const char* key, std::string_view raw) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  if (!obj.at(key).is_string()) fail(std::string("field \"") + key + "\" must be a string or null", raw);
  return obj.at(key).get<std::string>();
}

const json& require_array(const json& obj, const char* key, std::string_view raw) {
  const json& v = require(obj, key, raw);
  if (!v.is_array()) fail(std::string("field \"") + key + "\" must be a list", raw);
  return v;
}

std::vector<NodeId> id_list(const json& arr, const char* key, std::string_view raw) {
  std::vector<NodeId> out;
  for (const auto& v : arr) {
    if (!v.is_string() || v.get<std::string>().empty()) {
      fail(std::string("\"") + key + "\" entries must be nonempty node id strings", raw);
    }
    out.emplace_back(v.get<std::string>());
  }
  return out;
}

json ids_to_json(const std::vector<NodeId>& ids) {
  json arr = json::array();
  for (const auto& id : ids) arr.push_back(id.str());
  return arr;
}

}  // namespace

json extract_json(std::string_view text) {
  std::size_t pos = text.find('{');
  while (pos != std::string_view::npos) {
    if (auto end = balanced_end(text, pos)) {
      auto doc = json::parse(text.substr(pos, *end - pos + 1), nullptr, false);
      if (!doc.is_discarded() && doc.is_object()) return doc;
      pos = text.find('{', *end + 1);
    } else {
      pos = text.find('{', pos + 1);
    }
  }
  fail("no JSON object found in reply", text);
}

std::vector<SubgoalSpec> parse_subgoals(std::string_view text) {
  const json doc = extract_json(text);
  const json& arr = require_array(doc, "subgoals", text);
  if (arr.empty()) fail("empty decomposition: \"subgoals\" has no entries", text);

  std::vector<SubgoalSpec> out;
  std::set<std::string> seen;
  for (const auto& entry : arr) {
    if (!entry.is_object()) fail("each subgoal must be an object", text);
    const std::string id = require_string(entry, "id", text, true);
    if (!seen.insert(id).second) fail("duplicate subgoal id '" + id + "'", text);
    out.push_back({NodeId(id), require_string(entry, "description", text, true),
                   id_list(require_array(entry, "dependencies", text), "dependencies", text)});
  }
  for (const auto& s : out) {
    for (const auto& d : s.dependencies) {
      if (!seen.count(d.str())) {
        fail("subgoal '" + s.id.str() + "' depends on unknown node '" + d.str() + "'", text);
      }
    }
  }
  return out;
}

std::string render_subgoals(const std::vector<SubgoalSpec>& subgoals) {
  json arr = json::array();
  for (const auto& s : subgoals) {
    arr.push_back({{"id", s.id.str()}, {"description", s.description}, {"dependencies", ids_to_json(s.dependencies)}});
  }
  return json{{"subgoals", std::move(arr)}}.dump(2);
}

TaskGraph graph_from_subgoals(std::string task_description, const std::vector<SubgoalSpec>& subgoals) {
  TaskGraph graph(std::move(task_description));
  for (const auto& s : subgoals) {
    SubTaskNode node{s.id, s.description, {}, NodeStatus::Pending, std::nullopt, {}, std::nullopt, 0};
    node.dependencies.insert(s.dependencies.begin(), s.dependencies.end());
    graph.add_node(std::move(node));
  }
  return graph;
}

Plan parse_plan(std::string_view text) {
  static const std::regex header(R"(^\s*#{2,}\s*Step\s+(\d+)\b.*$)");
  std::vector<std::string> lines;
  {
    std::string line;
    std::istringstream in{std::string(text)};
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(std::move(line));
    }
  }

  Plan plan;
  std::size_t i = 0;
  while (i < lines.size() && !std::regex_match(lines[i], header)) ++i;
  if (i == lines.size()) fail("plan has no '## Step N' headers", text);

  while (i < lines.size()) {
    std::smatch m;
    std::regex_match(lines[i], m, header);
    const int index = std::stoi(m[1].str());
    if (index != static_cast<int>(plan.steps.size()) + 1) {
      fail("plan step numbering is not contiguous from 1 (found Step " + m[1].str() + ")", text);
    }
    ++i;

    std::string reasoning;
    std::string step;
    enum { None, InReasoning, InStep } mode = None;
    for (; i < lines.size() && !std::regex_match(lines[i], header); ++i) {
      const std::string stripped = trim(lines[i]);
      if (mode != InStep && stripped.rfind("Reasoning:", 0) == 0) {
        reasoning = trim(stripped.substr(10));
        mode = InReasoning;
      } else if (mode != InStep && stripped.rfind("Step:", 0) == 0) {
        step = trim(stripped.substr(5));
        mode = InStep;
      } else if (mode == InReasoning) {
        reasoning += "\n" + lines[i];
      } else if (mode == InStep) {
        step += "\n" + lines[i];
      }
    }
    if (mode != InStep) fail("plan step " + std::to_string(index) + " has no 'Step:' line", text);
    step = rtrim(step);
    if (step.empty()) fail("plan step " + std::to_string(index) + " has empty step text", text);
    plan.steps.push_back({index, rtrim(reasoning), std::move(step)});
  }
  return plan;
}

std::string render_plan(const Plan& plan) {
  std::string out;
  for (const auto& s : plan.steps) {
    if (!out.empty()) out += "\n\n";
    out += "## Step " + std::to_string(s.index) + "\nReasoning: " + s.reasoning + "\nStep: " + s.step_text;
  }
  return out;
}

std::string_view to_string(EvalStatus status) noexcept {
  switch (status) {
    case EvalStatus::Completed:
      return "completed";
    case EvalStatus::Failed:
      return "failed";
    case EvalStatus::NeedsMoreSteps:
      return "needs_more_steps";
  }
  return "unknown";
}

Evaluation parse_evaluation(std::string_view text) {
  const json doc = extract_json(text);
  const std::string status = require_string(doc, "status", text, false);
  Evaluation e;
  if (status == "completed") {
    e.status = EvalStatus::Completed;
  } else if (status == "failed") {
    e.status = EvalStatus::Failed;
  } else if (status == "needs_more_steps") {
    e.status = EvalStatus::NeedsMoreSteps;
  } else {
    fail("status '" + status + "' is not one of completed|failed|needs_more_steps", text);
  }
  e.reason = optional_string(doc, "reason", text);
  e.need_replan = require_bool(doc, "need_replan", text);
  if (e.status == EvalStatus::NeedsMoreSteps && !e.need_replan && (!e.reason || trim(*e.reason).empty())) {
    fail("needs_more_steps without replanning must carry guidance in \"reason\"", text);
  }
  return e;
}

std::string render_evaluation(const Evaluation& evaluation) {
  return json{{"status", std::string(to_string(evaluation.status))},
              {"reason", evaluation.reason ? json(*evaluation.reason) : json(nullptr)},
              {"need_replan", evaluation.need_replan}}
      .dump(2);
}

ReplanDecision parse_replan(std::string_view text) {
  const json doc = extract_json(text);
  ReplanDecision d;
  d.replan = require_bool(doc, "RePlan", text);
  d.thought = optional_string(doc, "Thought", text);

  const bool has_plan = doc.contains("NewPlan") && !doc.at("NewPlan").is_null();
  if (d.replan && !has_plan) fail("RePlan is true but NewPlan is missing", text);
  if (!d.replan && has_plan) fail("RePlan is false but NewPlan is present", text);
  if (has_plan) {
    const json& np = doc.at("NewPlan");
    std::string plan_text;
    if (np.is_string()) {
      plan_text = np.get<std::string>();
    } else if (np.is_array() && std::all_of(np.begin(), np.end(), [](const json& v) { return v.is_string(); })) {
      for (const auto& line : np) plan_text += line.get<std::string>() + "\n";
    } else {
      fail("NewPlan must be plan text", text);
    }
    try {
      d.new_plan = parse_plan(plan_text);
    } catch (const ParseError& e) {
      fail(std::string("NewPlan: ") + e.what(), text);
    }
  }
  return d;
}

std::string render_replan(const ReplanDecision& decision) {
  return json{{"RePlan", decision.replan},
              {"Thought", decision.thought ? json(*decision.thought) : json(nullptr)},
              {"NewPlan", decision.new_plan ? json(render_plan(*decision.new_plan)) : json(nullptr)}}
      .dump(2);
}

RevisionDelta parse_revision(std::string_view text) {
  const json doc = extract_json(text);
  RevisionDelta d;
  d.thought = require_string(doc, "thought", text, false);
  d.need_update = require_bool(doc, "need_update", text);

  for (const auto& u : require_array(doc, "description_updates", text)) {
    if (!u.is_object()) fail("description_updates entries must be objects", text);
    d.description_updates.push_back({NodeId(require_string(u, "node_id", text, true)),
                                     require_string(u, "new_description", text, true)});
  }
  for (const auto& n : require_array(doc, "new_nodes", text)) {
    if (!n.is_object()) fail("new_nodes entries must be objects", text);
    NewNodeSpec spec;
    if (auto id = optional_string(n, "id", text); id && !trim(*id).empty()) spec.id = NodeId(trim(*id));
    spec.description = require_string(n, "description", text, true);
    spec.dependencies = id_list(require_array(n, "dependencies", text), "dependencies", text);
    spec.dependents = id_list(require_array(n, "dependents", text), "dependents", text);
    d.new_nodes.push_back(std::move(spec));
  }
  d.remove_nodes = id_list(require_array(doc, "remove_nodes", text), "remove_nodes", text);
  return d;
}

std::string render_revision(const RevisionDelta& delta) {
  json updates = json::array();
  for (const auto& u : delta.description_updates) {
    updates.push_back({{"node_id", u.node_id.str()}, {"new_description", u.new_description}});
  }
  json nodes = json::array();
  for (const auto& n : delta.new_nodes) {
    nodes.push_back({{"id", n.id ? json(n.id->str()) : json(nullptr)},
                     {"description", n.description},
                     {"dependencies", ids_to_json(n.dependencies)},
                     {"dependents", ids_to_json(n.dependents)}});
  }
  return json{{"thought", delta.thought},
              {"need_update", delta.need_update},
              {"description_updates", std::move(updates)},
              {"new_nodes", std::move(nodes)},
              {"remove_nodes", ids_to_json(delta.remove_nodes)}}
      .dump(2);
}

std::string parse_action(std::string_view text) {
  std::string s = trim(text);
  if (s.size() >= 6 && s.rfind("```", 0) == 0 && s.compare(s.size() - 3, 3, "```") == 0) {
    std::string inner = s.substr(3, s.size() - 6);
    // Drop a language tag on the opening fence line.
    if (auto nl = inner.find('\n'); nl != std::string::npos && inner.find_first_of(" \t[") > nl) {
      inner = inner.substr(nl + 1);
    }
    s = trim(inner);
  } else if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'' || s.front() == '`') && s.back() == s.front()) {
    s = trim(s.substr(1, s.size() - 2));
  }
  if (s.empty()) fail("executor reply contains no action", text);
  return s;
}

std::string parse_react_action(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<std::string> action;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.rfind("Action:", 0) == 0) action = trim(stripped.substr(7));
  }
  if (!action) fail("reply has no 'Action:' line", text);
  return parse_action(*action);
}

}  // namespace dagplan
