#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace dagplan {

struct StepResult {
  std::string observation;
  std::optional<double> reward_delta;  // only for reward-bearing environments
  bool done = false;

  friend bool operator==(const StepResult&, const StepResult&) = default;
};

/// End-of-episode record consumed by telemetry.
struct EnvMetrics {
  bool done = false;
  std::optional<double> reward;       // cumulative, in [0, 1]
  std::optional<std::string> answer;  // Finish[...] argument
  std::optional<std::string> plan;    // MakePlan[...] output

  friend bool operator==(const EnvMetrics&, const EnvMetrics&) = default;
};

nlohmann::json env_metrics_to_json(const EnvMetrics& metrics);
EnvMetrics env_metrics_from_json(const nlohmann::json& doc);

/// One fixture: a query, its gold record and the world it runs against.
struct TaskInstance {
  std::string id;
  std::string environment;  // "mockwiki" | "traveltoy" | "textlab"
  std::string query;
  nlohmann::json gold = nlohmann::json::object();
  nlohmann::json payload = nlohmann::json::object();
};

class Environment {
 public:
  virtual ~Environment() = default;

  /// Clears all state and loads the task's world. Returns the first observation.
  std::string reset(const TaskInstance& task);
  /// Throws EnvironmentError after the episode is done or before reset().
  StepResult step(std::string_view action);

  bool done() const noexcept { return done_; }
  virtual std::string_view kind() const noexcept = 0;
  virtual std::vector<std::string> admissible_commands() const = 0;
  virtual EnvMetrics metrics() const = 0;

 protected:
  virtual std::string do_reset(const TaskInstance& task) = 0;
  virtual StepResult do_step(std::string_view action) = 0;
  void mark_done() noexcept { done_ = true; }

 private:
  bool loaded_ = false;
  bool done_ = false;
};

/// Throws FixtureError for an unknown kind.
std::unique_ptr<Environment> make_environment(std::string_view kind);

/// Newline-separated list for the {admissible_commands} placeholder.
std::string render_admissible_commands(const Environment& env);

/// `Name[arg, arg]` with comma-separated, trimmed arguments.
struct ActionCall {
  std::string name;
  std::string argument;           // raw text between the brackets
  std::vector<std::string> args;  // argument split on commas
};

std::optional<ActionCall> parse_action_call(std::string_view action);

}  // namespace dagplan
