#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "dagplan/backend.hpp"

namespace dagplan {

enum class EventKind { GraphConstructed, NodeDispatched, RoleCall, EnvStep, NodeStatus, Replan, Revision, RunEnd };

std::string_view to_string(EventKind kind) noexcept;
std::optional<EventKind> parse_event_kind(std::string_view text) noexcept;

struct TraceEvent {
  std::string run_id;
  std::int64_t seq = 0;
  std::int64_t timestamp = 0;  // logical tick (== seq) or milliseconds since the epoch
  EventKind kind = EventKind::RunEnd;
  nlohmann::json payload = nlohmann::json::object();

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

nlohmann::json event_to_json(const TraceEvent& event);
TraceEvent event_from_json(const nlohmann::json& doc);

inline constexpr std::string_view kTraceFormat = "dagplan-trace";
inline constexpr int kTraceVersion = 1;

/// Append-only event store. Per run, sequence numbers must start at 0 and
/// increase by exactly one; anything else is rejected with TelemetryError.
/// Safe for concurrent appends from independent runs.
class TraceSink {
 public:
  virtual ~TraceSink() = default;
  void append(const TraceEvent& event);

 protected:
  virtual void write(const TraceEvent& event) = 0;

 private:
  std::mutex mutex_;
  std::map<std::string, std::int64_t> next_seq_;
};

class MemoryTraceSink final : public TraceSink {
 public:
  std::vector<TraceEvent> events() const;
  std::vector<TraceEvent> events_for(std::string_view run_id) const;

 protected:
  void write(const TraceEvent& event) override;

 private:
  mutable std::mutex mutex_;
  std::vector<TraceEvent> events_;
};

/// One JSON object per line after a `{"format": "dagplan-trace", "version": 1}` header.
class JsonlTraceSink final : public TraceSink {
 public:
  explicit JsonlTraceSink(const std::filesystem::path& path);

 protected:
  void write(const TraceEvent& event) override;

 private:
  std::ofstream out_;
};

/// Reads a trace file back, checking the header and per-run contiguity.
std::vector<TraceEvent> read_trace(const std::filesystem::path& path);

/// Stamps events for one run and forwards them to an optional sink while
/// keeping a local copy.
class TraceRecorder {
 public:
  explicit TraceRecorder(std::string run_id, TraceSink* sink = nullptr, bool wall_clock = false);

  const TraceEvent& emit(EventKind kind, nlohmann::json payload);
  const std::vector<TraceEvent>& events() const noexcept { return events_; }
  const std::string& run_id() const noexcept { return run_id_; }

 private:
  std::string run_id_;
  TraceSink* sink_;
  bool wall_clock_;
  std::vector<TraceEvent> events_;
};

/// Token usage per (run, role, scope); scope is a node id or "global".
class TokenLedger {
 public:
  using Key = std::tuple<std::string, Role, std::string>;

  void add(const std::string& run_id, Role role, const std::string& scope, const TokenUsage& usage);
  const std::map<Key, TokenUsage>& cells() const noexcept { return cells_; }
  TokenUsage total() const;
  TokenUsage total_for(Role role) const;

  /// Rebuilds the ledger from role_call events.
  static TokenLedger from_events(const std::vector<TraceEvent>& events);

 private:
  std::map<Key, TokenUsage> cells_;
};

}  // namespace dagplan
