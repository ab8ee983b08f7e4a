#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dagplan::cli {

/// Entry point behind the `dagplan` executable. Returns the process exit
/// status: 0 on full success, 1 on a runtime failure, CLI11's code on a
/// usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Resolves a --tasks argument: an existing path, else fixtures/<name>
/// under the working directory, else under $DAGPLAN_FIXTURES.
std::filesystem::path resolve_task_set(const std::string& name);

/// Trace files matching a directory, a file or a `dir/pattern*.jsonl` glob,
/// sorted by path.
std::vector<std::filesystem::path> expand_traces(const std::string& pattern);

}  // namespace dagplan::cli
