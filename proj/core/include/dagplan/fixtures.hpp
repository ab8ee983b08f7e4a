#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "dagplan/environment.hpp"

namespace dagplan {

inline constexpr int kFixtureVersion = 1;

/// {"version": 1, "id", "environment", "query", "gold", "payload"}.
/// Throws FixtureError when malformed or when the gold record is
/// inconsistent with the payload.
TaskInstance task_from_json(const nlohmann::json& doc);
nlohmann::json task_to_json(const TaskInstance& task);

/// Checks the gold record against the world payload; throws FixtureError.
void validate_task(const TaskInstance& task);

TaskInstance load_task(const std::filesystem::path& file);

/// A directory of *.json fixtures (sorted by file name) or a single fixture file.
std::vector<TaskInstance> load_task_set(const std::filesystem::path& path);

}  // namespace dagplan
