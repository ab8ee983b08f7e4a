#include "dagplan/cli.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dagplan/config.hpp"
#include "dagplan/engine.hpp"
#include "dagplan/errors.hpp"
#include "dagplan/fixtures.hpp"
#include "dagplan/metrics.hpp"
#include "dagplan/telemetry.hpp"

namespace dagplan::cli {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path resolve_task_set(const std::string& name) {
  if (fs::exists(name)) return name;
  if (fs::path local = fs::path("fixtures") / name; fs::exists(local)) return local;
  if (const char* root = std::getenv("DAGPLAN_FIXTURES")) {
    if (fs::path shared = fs::path(root) / name; fs::exists(shared)) return shared;
  }
  throw FixtureError("fixture set not found: " + name);
}

std::vector<fs::path> expand_traces(const std::string& pattern) {
  std::vector<fs::path> out;
  const fs::path p(pattern);
  if (fs::is_regular_file(p)) return {p};
  fs::path dir = p;
  std::string glob = "*.jsonl";
  if (!fs::is_directory(p)) {
    dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    glob = p.filename().string();
  }
  if (!fs::is_directory(dir)) throw TelemetryError("trace directory not found: " + dir.string());
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && fnmatch(glob.c_str(), entry.path().filename().c_str(), 0) == 0) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw TelemetryError("no trace files match " + pattern);
  return out;
}

namespace {

struct RunOutcome {
  RunReport report;
  MetricsRecord metrics;
};

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto m = parse_method(item);
    if (!m) throw ConfigError("unknown method '" + item + "' (expected tdp, react, cot or plan-act)");
    if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
  }
  if (out.empty()) throw ConfigError("no methods given");
  return out;
}

/// Runs every (method, task) pair, one trace file per run, `jobs` at a time.
std::vector<RunOutcome> run_matrix(const std::vector<Method>& methods, const std::vector<TaskInstance>& tasks,
                                   const LoadedConfig& config, const fs::path& trace_dir) {
  struct Job {
    Method method;
    const TaskInstance* task;
  };
  std::vector<Job> jobs;
  for (Method m : methods) {
    for (const auto& t : tasks) jobs.push_back({m, &t});
  }
  fs::create_directories(trace_dir);

  std::vector<std::optional<RunOutcome>> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::string first_error;

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const Job& job = jobs[i];
        auto env = make_environment(job.task->environment);
        const std::string run_id = default_run_id(job.method, *job.task);
        JsonlTraceSink sink(trace_dir / (run_id + ".jsonl"));
        RunReport report = run_method(job.method, *job.task, *env, config.run, &sink, run_id);
        MetricsRecord metrics = compute_metrics(report.events);
        results[i] = RunOutcome{std::move(report), std::move(metrics)};
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (first_error.empty()) first_error = e.what();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), jobs.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (!first_error.empty()) throw Error(first_error);

  std::vector<RunOutcome> out;
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

void print_run_line(std::ostream& out, const RunOutcome& r) {
  out << r.report.run_id << ": " << to_string(r.report.terminal) << " (" << r.report.reason << "), steps "
      << r.report.steps_used << "/" << r.report.s_max << ", output tokens " << r.metrics.output_tokens << '\n';
}

void write_json(const std::string& path, const json& doc) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << doc.dump(2) << '\n';
}

std::map<std::string, std::vector<MetricsRecord>> by_method(const std::vector<MetricsRecord>& records) {
  std::map<std::string, std::vector<MetricsRecord>> out;
  for (const auto& r : records) out[r.method].push_back(r);
  return out;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dependency-graph task planner with baseline controllers", "dagplan"};
  app.require_subcommand(1);

  std::string method = "tdp", methods = "tdp,plan-act", tasks, config_path, trace_dir, reference = "plan-act";
  std::string trace_path, trace_glob, json_out;
  std::optional<int> jobs;

  auto* run = app.add_subcommand("run", "Run one method on every task of a fixture set");
  run->add_option("--method", method, "tdp, react, cot or plan-act")->check(CLI::IsMember({"tdp", "react", "cot", "plan-act"}));
  run->add_option("--tasks", tasks, "Fixture directory, file, or set name under fixtures/")->required();
  run->add_option("--config", config_path, "Run configuration file")->required();
  run->add_option("--trace-dir", trace_dir, "Directory for trace files (overrides the config)");
  run->add_option("--jobs", jobs, "Runs executed concurrently")->check(CLI::PositiveNumber);
  run->add_option("--json", json_out, "Write per-run metrics to this file");

  auto* compare = app.add_subcommand("compare", "Run several methods on a fixture set and compare them");
  compare->add_option("--methods", methods, "Comma-separated methods");
  compare->add_option("--tasks", tasks, "Fixture directory, file, or set name under fixtures/")->required();
  compare->add_option("--config", config_path, "Run configuration file")->required();
  compare->add_option("--reference", reference, "Method the token reduction is measured against");
  compare->add_option("--trace-dir", trace_dir, "Directory for trace files (overrides the config)");
  compare->add_option("--jobs", jobs, "Runs executed concurrently")->check(CLI::PositiveNumber);
  compare->add_option("--json", json_out, "Write the comparison document to this file");

  auto* replay = app.add_subcommand("replay", "Recompute metrics from a trace without contacting any backend");
  replay->add_option("--trace", trace_path, "Trace file")->required();
  replay->add_option("--json", json_out, "Write the recomputed metrics to this file");

  auto* report = app.add_subcommand("report", "Aggregate existing traces into a comparison table");
  report->add_option("--traces", trace_glob, "Trace directory, file, or glob such as traces/*.jsonl")->required();
  report->add_option("--reference", reference, "Method the token reduction is measured against");
  report->add_option("--json", json_out, "Write the comparison document to this file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*run || *compare) {
      LoadedConfig config = load_config(config_path);
      if (jobs) config.jobs = *jobs;
      const fs::path traces = trace_dir.empty() ? config.trace_dir : fs::path(trace_dir);
      const auto task_set = load_task_set(resolve_task_set(tasks));
      const auto selected = *run ? std::vector<Method>{*parse_method(method)} : parse_methods(methods);
      const auto outcomes = run_matrix(selected, task_set, config, traces);

      std::vector<MetricsRecord> records;
      for (const auto& r : outcomes) {
        print_run_line(out, r);
        records.push_back(r.metrics);
      }
      if (*run) {
        json doc = json::array();
        for (const auto& r : records) doc.push_back(metrics_to_json(r));
        write_json(json_out, doc);
        out << "Wrote " << outcomes.size() << " trace(s) to " << traces.string() << '\n';
        return 0;
      }
      const auto batches = by_method(records);
      const ComparisonReport cmp = compare_report(batches, reference);
      out << '\n' << render_table(cmp);
      write_json(json_out, comparison_to_json(cmp));
      return 0;
    }

    if (*replay) {
      if (!fs::exists(trace_path)) throw TelemetryError("trace not found: " + trace_path);
      json doc = json::array();
      for (const auto& run_events : split_runs(read_trace(trace_path))) {
        const MetricsRecord m = compute_metrics(run_events);
        out << metrics_to_json(m).dump() << '\n';
        doc.push_back(metrics_to_json(m));
      }
      write_json(json_out, doc);
      return 0;
    }

    std::vector<MetricsRecord> records;
    for (const auto& file : expand_traces(trace_glob)) {
      for (const auto& run_events : split_runs(read_trace(file))) records.push_back(compute_metrics(run_events));
    }
    const auto batches = by_method(records);
    if (!batches.count(reference)) {
      if (report->count("--reference") > 0) throw ConfigError("reference method '" + reference + "' not in traces");
      reference = batches.begin()->first;
    }
    const ComparisonReport cmp = compare_report(batches, reference);
    out << render_table(cmp);
    write_json(json_out, comparison_to_json(cmp));
    return 0;
  } catch (const std::exception& e) {
    err << "dagplan: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace dagplan::cli
