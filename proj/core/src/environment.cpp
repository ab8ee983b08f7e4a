#include "dagplan/environment.hpp"

#include <regex>

#include "dagplan/errors.hpp"
#include "dagplan/mocks.hpp"
#include "dagplan/parsers.hpp"

namespace dagplan {

using nlohmann::json;

json env_metrics_to_json(const EnvMetrics& m) {
  return {{"done", m.done},
          {"reward", m.reward ? json(*m.reward) : json(nullptr)},
          {"answer", m.answer ? json(*m.answer) : json(nullptr)},
          {"plan", m.plan ? json(*m.plan) : json(nullptr)}};
}

EnvMetrics env_metrics_from_json(const json& doc) {
  EnvMetrics m;
  m.done = doc.value("done", false);
  if (doc.contains("reward") && !doc.at("reward").is_null()) m.reward = doc.at("reward").get<double>();
  if (doc.contains("answer") && !doc.at("answer").is_null()) m.answer = doc.at("answer").get<std::string>();
  if (doc.contains("plan") && !doc.at("plan").is_null()) m.plan = doc.at("plan").get<std::string>();
  return m;
}

std::string Environment::reset(const TaskInstance& task) {
  done_ = false;
  loaded_ = true;
  return do_reset(task);
}

StepResult Environment::step(std::string_view action) {
  if (!loaded_) throw EnvironmentError("step() called before reset()");
  if (done_) throw EnvironmentError("step() called after the episode finished");
  StepResult r = do_step(action);
  if (r.done) done_ = true;
  r.done = done_;
  return r;
}

std::unique_ptr<Environment> make_environment(std::string_view kind) {
  if (kind == "mockwiki") return std::make_unique<MockWiki>();
  if (kind == "traveltoy") return std::make_unique<TravelToy>();
  if (kind == "textlab") return std::make_unique<TextLab>();
  throw FixtureError("unknown environment '" + std::string(kind) + "'");
}

std::string render_admissible_commands(const Environment& env) {
  std::string out;
  for (const auto& c : env.admissible_commands()) {
    if (!out.empty()) out += '\n';
    out += c;
  }
  return out;
}

std::optional<ActionCall> parse_action_call(std::string_view action) {
  static const std::regex pattern(R"(^\s*([A-Za-z]+)\s*\[([\s\S]*)\]\s*$)");
  const std::string text(action);
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) return std::nullopt;
  ActionCall call{m[1].str(), trim(m[2].str()), {}};
  std::size_t start = 0;
  const std::string& arg = call.argument;
  while (true) {
    const std::size_t comma = arg.find(',', start);
    call.args.push_back(trim(std::string_view(arg).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return call;
}

}  // namespace dagplan
