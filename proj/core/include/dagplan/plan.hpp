#pragma once

#include <string>
#include <vector>

namespace dagplan {

struct PlanStep {
  int index = 0;  // 1-based, contiguous within a Plan
  std::string reasoning;
  std::string step_text;

  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

// Node-level plan as produced by the planner role ("## Step N" blocks).
struct Plan {
  std::vector<PlanStep> steps;

  bool empty() const noexcept { return steps.empty(); }
  friend bool operator==(const Plan&, const Plan&) = default;
};

}  // namespace dagplan
