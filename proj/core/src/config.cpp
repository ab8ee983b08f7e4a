#include "dagplan/config.hpp"

#include <fstream>

#include "dagplan/errors.hpp"

namespace dagplan {

using nlohmann::json;

namespace {

json read_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open " + file.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError(file.string() + " is not valid JSON");
  return doc;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

std::shared_ptr<ModelBackend> make_backend(const json& spec, const std::filesystem::path& base_dir) {
  if (!spec.is_object()) throw ConfigError("backend description must be an object");
  const std::string type = spec.value("type", "");
  if (type == "scripted") {
    if (spec.contains("script")) {
      return ScriptedBackend::from_json(read_json(resolve(base_dir, spec.at("script").get<std::string>())));
    }
    return ScriptedBackend::from_json(spec);
  }
  if (type == "remote") {
    RemoteChatSettings s;
    s.endpoint = spec.value("endpoint", "");
    s.model = spec.value("model", "");
    s.temperature = spec.value("temperature", 0.0);
    s.api_key_env = spec.value("api_key_env", "");
    s.timeout_seconds = spec.value("timeout_seconds", 120);
    return std::make_shared<RemoteChatBackend>(std::move(s));
  }
  throw ConfigError("unknown backend type '" + type + "'");
}

LoadedConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  LoadedConfig out;
  RunConfig& rc = out.run;
  try {
    rc.s_max = doc.value("s_max", rc.s_max);
    rc.max_replans_per_node = doc.value("max_replans_per_node", rc.max_replans_per_node);
    rc.parser_retry_budget = doc.value("parser_retry_budget", rc.parser_retry_budget);
    rc.history_cap = doc.value("history_cap", rc.history_cap);
    rc.outcome_k = doc.value("outcome_k", rc.outcome_k);
    rc.max_rounds = doc.value("max_rounds", rc.max_rounds);
    rc.wall_clock = doc.value("wall_clock", false);
    out.jobs = doc.value("jobs", 1);
    if (doc.contains("template_dir")) {
      rc.templates = TemplateSet::from_directory(resolve(base_dir, doc.at("template_dir").get<std::string>()));
    }
    if (doc.contains("trace_dir")) out.trace_dir = resolve(base_dir, doc.at("trace_dir").get<std::string>());

    if (doc.contains("backend")) rc.backends = RoleBackends::shared(make_backend(doc.at("backend"), base_dir));
    if (doc.contains("backends")) {
      const json& b = doc.at("backends");
      if (b.contains("supervisor")) rc.backends.supervisor = make_backend(b.at("supervisor"), base_dir);
      if (b.contains("planner")) rc.backends.planner = make_backend(b.at("planner"), base_dir);
      if (b.contains("executor")) rc.backends.executor = make_backend(b.at("executor"), base_dir);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  if (out.jobs < 1) throw ConfigError("jobs must be at least 1");
  rc.validate();
  return out;
}

LoadedConfig load_config(const std::filesystem::path& file) {
  if (!std::filesystem::exists(file)) throw ConfigError("configuration not found: " + file.string());
  const json doc = read_json(file);
  try {
    return config_from_json(doc, file.has_parent_path() ? file.parent_path() : std::filesystem::path("."));
  } catch (const ConfigError& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
}

}  // namespace dagplan
