#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dagplan/telemetry.hpp"

namespace dagplan {

/// Lowercase, drop punctuation and the articles a/an/the, collapse whitespace.
std::string normalize_answer(std::string_view text);

/// Checklist result for one plan against a gold constraint set.
struct ConstraintTally {
  int commonsense_passed = 0;
  int commonsense_total = 0;
  int hard_passed = 0;
  int hard_total = 0;

  bool all_commonsense() const noexcept { return commonsense_passed == commonsense_total; }
  bool all_hard() const noexcept { return hard_passed == hard_total; }

  friend bool operator==(const ConstraintTally&, const ConstraintTally&) = default;
};

/// A constraint {name, category, contains[], excludes[]} holds when every
/// `contains` string occurs in the plan and no `excludes` string does. A
/// missing plan fails every constraint.
ConstraintTally check_constraints(const std::optional<std::string>& plan, const nlohmann::json& constraints);

/// Per-run metrics, computed from the events of one run.
struct MetricsRecord {
  std::string run_id;
  std::string task_id;
  std::string method;
  bool delivery = false;
  std::optional<bool> accuracy;  // absent without a gold answer
  std::optional<double> reward;
  std::int64_t prompt_tokens = 0;
  std::int64_t output_tokens = 0;
  int steps_used = 0;
  int replans_total = 0;
  std::optional<double> nodes_touched_per_replan;
  std::optional<ConstraintTally> constraints;

  /// Accuracy counted only for delivered runs.
  std::optional<bool> delivered_accuracy() const {
    if (!delivery) return std::nullopt;
    return accuracy;
  }

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

/// Requires a run_end event (TelemetryError otherwise). The gold record is
/// read from run_end unless `gold` is given.
MetricsRecord compute_metrics(const std::vector<TraceEvent>& run_events,
                              const std::optional<nlohmann::json>& gold = std::nullopt);

/// Splits a multi-run event list by run id, keeping first-seen order.
std::vector<std::vector<TraceEvent>> split_runs(const std::vector<TraceEvent>& events);

struct AggregateMetrics {
  std::string method;
  std::size_t runs = 0;
  double delivery_rate = 0.0;
  std::optional<double> accuracy;            // over runs with a gold answer
  std::optional<double> delivered_accuracy;  // over delivered runs with a gold answer
  std::optional<double> avg_reward;          // over reward-bearing runs
  double avg_prompt_tokens = 0.0;
  double avg_output_tokens = 0.0;
  double avg_steps = 0.0;
  int replans_total = 0;
  std::optional<double> nodes_touched_per_replan;
  // Plan-checklist scores over runs carrying a constraint set.
  std::optional<double> commonsense_micro;
  std::optional<double> commonsense_macro;
  std::optional<double> hard_micro;
  std::optional<double> hard_macro;
  std::optional<double> final_pass;
  /// Mean of delivery, both micro and both macro rates, and final pass.
  std::optional<double> travel_avg;

  friend bool operator==(const AggregateMetrics&, const AggregateMetrics&) = default;
};

/// Throws TelemetryError on an empty batch.
AggregateMetrics aggregate(const std::string& method, const std::vector<MetricsRecord>& records);

struct ComparisonRow {
  AggregateMetrics metrics;
  std::optional<double> token_reduction;  // 1 - tokens/reference tokens
};

struct ComparisonReport {
  std::string reference;
  std::vector<ComparisonRow> rows;  // method-name order
};

/// Per-method means plus output-token reduction against `reference`.
/// Throws TelemetryError on an empty batch or an unknown reference.
ComparisonReport compare_report(const std::map<std::string, std::vector<MetricsRecord>>& batches,
                                const std::string& reference = "plan-act");

std::string render_table(const ComparisonReport& report);
nlohmann::json comparison_to_json(const ComparisonReport& report);
nlohmann::json metrics_to_json(const MetricsRecord& record);
nlohmann::json aggregate_to_json(const AggregateMetrics& metrics);

}  // namespace dagplan
