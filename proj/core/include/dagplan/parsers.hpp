#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dagplan/graph.hpp"
#include "dagplan/plan.hpp"

namespace dagplan {

// Strict readers for the structured replies of the three roles, plus the
// matching writers. Every reader throws ParseError carrying the raw text.

/// First balanced `{...}` in the text that parses as a JSON object. Code
/// fences and surrounding prose are skipped.
nlohmann::json extract_json(std::string_view text);

struct SubgoalSpec {
  NodeId id;
  std::string description;
  std::vector<NodeId> dependencies;

  friend bool operator==(const SubgoalSpec&, const SubgoalSpec&) = default;
};

std::vector<SubgoalSpec> parse_subgoals(std::string_view text);
std::string render_subgoals(const std::vector<SubgoalSpec>& subgoals);

/// Turns a decomposition into a fresh all-Pending graph (no validation).
TaskGraph graph_from_subgoals(std::string task_description, const std::vector<SubgoalSpec>& subgoals);

/// "## Step N" / "Reasoning: ..." / "Step: ..." blocks, numbered from 1.
Plan parse_plan(std::string_view text);
std::string render_plan(const Plan& plan);

enum class EvalStatus { Completed, Failed, NeedsMoreSteps };

std::string_view to_string(EvalStatus status) noexcept;

struct Evaluation {
  EvalStatus status = EvalStatus::NeedsMoreSteps;
  std::optional<std::string> reason;
  bool need_replan = false;

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

Evaluation parse_evaluation(std::string_view text);
std::string render_evaluation(const Evaluation& evaluation);

struct ReplanDecision {
  bool replan = false;
  std::optional<std::string> thought;
  std::optional<Plan> new_plan;

  friend bool operator==(const ReplanDecision&, const ReplanDecision&) = default;
};

ReplanDecision parse_replan(std::string_view text);
std::string render_replan(const ReplanDecision& decision);

RevisionDelta parse_revision(std::string_view text);
std::string render_revision(const RevisionDelta& delta);

/// Executor reply: trimmed, with one wrapping layer of code fence or quotes
/// removed. Empty replies are a ParseError.
std::string parse_action(std::string_view text);

/// ReAct reply: the text after the last "Action:" line.
std::string parse_react_action(std::string_view text);

std::string trim(std::string_view text);

}  // namespace dagplan
