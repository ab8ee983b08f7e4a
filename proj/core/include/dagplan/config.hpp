#pragma once

#include <filesystem>
#include <memory>

#include <json.hpp>

#include "dagplan/engine.hpp"

namespace dagplan {

/// Everything a run configuration file declares. Relative paths resolve
/// against the file's directory.
struct LoadedConfig {
  RunConfig run;
  std::filesystem::path trace_dir = "traces";
  int jobs = 1;
};

/// A backend from its JSON description:
///   {"type": "scripted", "rules": [...], "fallback": "..."}
///   {"type": "scripted", "script": "file.json"}
///   {"type": "remote", "endpoint": ..., "model": ..., "api_key_env": ..., "temperature": ...}
/// Remote backends check their credential variable here, so a missing key
/// fails before any run starts.
std::shared_ptr<ModelBackend> make_backend(const nlohmann::json& spec, const std::filesystem::path& base_dir);

/// Parses a configuration document. Backends come from "backend" (shared by
/// all roles) and/or "backends": {"supervisor", "planner", "executor"}.
LoadedConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);

/// Throws ConfigError naming the path when missing or malformed.
LoadedConfig load_config(const std::filesystem::path& file);

}  // namespace dagplan
