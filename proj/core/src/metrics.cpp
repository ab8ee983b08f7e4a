#include "dagplan/metrics.hpp"

#include <cctype>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "dagplan/environment.hpp"
#include "dagplan/errors.hpp"

namespace dagplan {

using nlohmann::json;

std::string normalize_answer(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (unsigned char c : text) {
    if (std::ispunct(c)) continue;
    cleaned += std::isspace(c) ? ' ' : static_cast<char>(std::tolower(c));
  }
  std::istringstream words(cleaned);
  std::string word;
  std::string out;
  while (words >> word) {
    if (word == "a" || word == "an" || word == "the") continue;
    if (!out.empty()) out += ' ';
    out += word;
  }
  return out;
}

ConstraintTally check_constraints(const std::optional<std::string>& plan, const json& constraints) {
  ConstraintTally tally;
  for (const auto& c : constraints) {
    bool ok = plan.has_value();
    if (ok) {
      for (const auto& needle : c.value("contains", std::vector<std::string>{})) {
        ok = ok && plan->find(needle) != std::string::npos;
      }
      for (const auto& needle : c.value("excludes", std::vector<std::string>{})) {
        ok = ok && plan->find(needle) == std::string::npos;
      }
    }
    if (c.at("category").get<std::string>() == "hard") {
      ++tally.hard_total;
      tally.hard_passed += ok;
    } else {
      ++tally.commonsense_total;
      tally.commonsense_passed += ok;
    }
  }
  return tally;
}

namespace {

std::optional<bool> score_answer(const json& gold, const std::optional<std::string>& answer) {
  if (!gold.is_object() || !gold.contains("answer")) return std::nullopt;
  if (!answer) return false;
  const std::string given = normalize_answer(*answer);
  const json& expected = gold.at("answer");
  if (expected.is_array()) {
    for (const auto& e : expected) {
      if (normalize_answer(e.get<std::string>()) == given) return true;
    }
    return false;
  }
  return normalize_answer(expected.get<std::string>()) == given;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

std::optional<double> mean_or_none(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return mean(v);
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

MetricsRecord compute_metrics(const std::vector<TraceEvent>& events, const std::optional<json>& gold_override) {
  const TraceEvent* end = nullptr;
  for (const auto& e : events) {
    if (e.kind == EventKind::RunEnd) end = &e;
  }
  if (!end) throw TelemetryError("run has no run_end event");
  const json& p = end->payload;

  MetricsRecord m;
  m.run_id = end->run_id;
  m.task_id = p.value("task_id", "");
  m.method = p.value("method", "");
  m.delivery = p.value("terminal", "") == "Completed";
  m.steps_used = p.value("steps_used", 0);
  const EnvMetrics env = env_metrics_from_json(p.value("env", json::object()));
  m.reward = env.reward;

  const json gold = gold_override ? *gold_override : p.value("gold", json::object());
  m.accuracy = score_answer(gold, env.answer);
  if (gold.is_object() && gold.contains("constraints")) m.constraints = check_constraints(env.plan, gold.at("constraints"));

  const TokenUsage tokens = TokenLedger::from_events(events).total();
  m.prompt_tokens = tokens.prompt_tokens;
  m.output_tokens = tokens.output_tokens;

  std::vector<double> touched;
  for (const auto& e : events) {
    if (e.kind != EventKind::Replan) continue;
    ++m.replans_total;
    touched.push_back(e.payload.value("nodes_touched", 0.0));
  }
  m.nodes_touched_per_replan = mean_or_none(touched);
  return m;
}

std::vector<std::vector<TraceEvent>> split_runs(const std::vector<TraceEvent>& events) {
  std::vector<std::vector<TraceEvent>> runs;
  std::map<std::string, std::size_t> index;
  for (const auto& e : events) {
    auto [it, inserted] = index.try_emplace(e.run_id, runs.size());
    if (inserted) runs.emplace_back();
    runs[it->second].push_back(e);
  }
  return runs;
}

AggregateMetrics aggregate(const std::string& method, const std::vector<MetricsRecord>& records) {
  if (records.empty()) throw TelemetryError("empty batch for method '" + method + "'");
  AggregateMetrics a;
  a.method = method;
  a.runs = records.size();

  std::vector<double> delivery, accuracy, delivered, reward, prompt, output, steps, touched;
  std::vector<double> cs_macro, hc_macro, final_pass;
  double cs_passed = 0, cs_total = 0, hc_passed = 0, hc_total = 0;
  for (const auto& r : records) {
    delivery.push_back(r.delivery);
    if (r.accuracy) accuracy.push_back(*r.accuracy);
    if (auto d = r.delivered_accuracy()) delivered.push_back(*d);
    if (r.reward) reward.push_back(*r.reward);
    prompt.push_back(static_cast<double>(r.prompt_tokens));
    output.push_back(static_cast<double>(r.output_tokens));
    steps.push_back(r.steps_used);
    a.replans_total += r.replans_total;
    for (int i = 0; i < r.replans_total && r.nodes_touched_per_replan; ++i) touched.push_back(*r.nodes_touched_per_replan);
    if (r.constraints) {
      const auto& c = *r.constraints;
      cs_passed += c.commonsense_passed;
      cs_total += c.commonsense_total;
      hc_passed += c.hard_passed;
      hc_total += c.hard_total;
      cs_macro.push_back(c.all_commonsense());
      hc_macro.push_back(c.all_hard());
      final_pass.push_back(c.all_commonsense() && c.all_hard());
    }
  }
  a.delivery_rate = mean(delivery);
  a.accuracy = mean_or_none(accuracy);
  a.delivered_accuracy = mean_or_none(delivered);
  a.avg_reward = mean_or_none(reward);
  a.avg_prompt_tokens = mean(prompt);
  a.avg_output_tokens = mean(output);
  a.avg_steps = mean(steps);
  a.nodes_touched_per_replan = mean_or_none(touched);
  if (!final_pass.empty()) {
    if (cs_total > 0) a.commonsense_micro = cs_passed / cs_total;
    if (hc_total > 0) a.hard_micro = hc_passed / hc_total;
    a.commonsense_macro = mean(cs_macro);
    a.hard_macro = mean(hc_macro);
    a.final_pass = mean(final_pass);
    std::vector<double> six = {a.delivery_rate};
    for (const auto& v : {a.commonsense_micro, a.commonsense_macro, a.hard_micro, a.hard_macro, a.final_pass}) {
      if (v) six.push_back(*v);
    }
    a.travel_avg = mean(six);
  }
  return a;
}

ComparisonReport compare_report(const std::map<std::string, std::vector<MetricsRecord>>& batches,
                                const std::string& reference) {
  if (batches.empty()) throw TelemetryError("no batches to compare");
  auto ref = batches.find(reference);
  if (ref == batches.end()) throw TelemetryError("reference method '" + reference + "' has no batch");
  const double ref_tokens = aggregate(reference, ref->second).avg_output_tokens;

  ComparisonReport report;
  report.reference = reference;
  for (const auto& [method, records] : batches) {
    ComparisonRow row{aggregate(method, records), std::nullopt};
    if (ref_tokens > 0) row.token_reduction = 1.0 - row.metrics.avg_output_tokens / ref_tokens;
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string render_table(const ComparisonReport& report) {
  auto pct = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << *v * 100.0 << "%";
    return s.str();
  };
  auto num = [](double v, int precision) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << v;
    return s.str();
  };
  const std::vector<std::string> header = {"method", "runs", "delivery", "accuracy", "delivered_acc", "avg_reward",
                                           "avg_out_tokens", "replans", "reduction_vs_" + report.reference};
  std::vector<std::vector<std::string>> rows = {header};
  for (const auto& r : report.rows) {
    const auto& m = r.metrics;
    rows.push_back({m.method, std::to_string(m.runs), pct(m.delivery_rate), pct(m.accuracy), pct(m.delivered_accuracy),
                    m.avg_reward ? num(*m.avg_reward, 3) : "-", num(m.avg_output_tokens, 1),
                    std::to_string(m.replans_total), pct(r.token_reduction)});
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      out << (i ? "  " : "") << std::left << std::setw(static_cast<int>(width[i])) << rows[r][i];
    }
    out << '\n';
    if (r == 0) {
      for (std::size_t i = 0; i < width.size(); ++i) out << (i ? "  " : "") << std::string(width[i], '-');
      out << '\n';
    }
  }
  return out.str();
}

json metrics_to_json(const MetricsRecord& r) {
  json out = {{"run_id", r.run_id},
              {"task_id", r.task_id},
              {"method", r.method},
              {"delivery", r.delivery},
              {"accuracy", r.accuracy ? json(*r.accuracy) : json(nullptr)},
              {"delivered_accuracy", r.delivered_accuracy() ? json(*r.delivered_accuracy()) : json(nullptr)},
              {"reward", opt(r.reward)},
              {"prompt_tokens", r.prompt_tokens},
              {"output_tokens", r.output_tokens},
              {"steps_used", r.steps_used},
              {"replans_total", r.replans_total},
              {"nodes_touched_per_replan", opt(r.nodes_touched_per_replan)}};
  if (r.constraints) {
    const auto& c = *r.constraints;
    out["constraints"] = {{"commonsense_passed", c.commonsense_passed},
                          {"commonsense_total", c.commonsense_total},
                          {"hard_passed", c.hard_passed},
                          {"hard_total", c.hard_total}};
  }
  return out;
}

json aggregate_to_json(const AggregateMetrics& a) {
  return {{"method", a.method},
          {"runs", a.runs},
          {"delivery_rate", a.delivery_rate},
          {"accuracy", opt(a.accuracy)},
          {"delivered_accuracy", opt(a.delivered_accuracy)},
          {"avg_reward", opt(a.avg_reward)},
          {"avg_prompt_tokens", a.avg_prompt_tokens},
          {"avg_output_tokens", a.avg_output_tokens},
          {"avg_steps", a.avg_steps},
          {"replans_total", a.replans_total},
          {"nodes_touched_per_replan", opt(a.nodes_touched_per_replan)},
          {"commonsense_micro", opt(a.commonsense_micro)},
          {"commonsense_macro", opt(a.commonsense_macro)},
          {"hard_micro", opt(a.hard_micro)},
          {"hard_macro", opt(a.hard_macro)},
          {"final_pass", opt(a.final_pass)},
          {"travel_avg", opt(a.travel_avg)}};
}

json comparison_to_json(const ComparisonReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row = aggregate_to_json(r.metrics);
    row["token_reduction"] = opt(r.token_reduction);
    rows.push_back(std::move(row));
  }
  return {{"reference", report.reference}, {"methods", rows}};
}

}  // namespace dagplan
