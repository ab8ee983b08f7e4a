#include "dagplan/telemetry.hpp"

#include <array>
#include <chrono>

#include "dagplan/errors.hpp"

namespace dagplan {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 8> kKindNames = {{
    {EventKind::GraphConstructed, "graph_constructed"},
    {EventKind::NodeDispatched, "node_dispatched"},
    {EventKind::RoleCall, "role_call"},
    {EventKind::EnvStep, "env_step"},
    {EventKind::NodeStatus, "node_status"},
    {EventKind::Replan, "replan"},
    {EventKind::Revision, "revision"},
    {EventKind::RunEnd, "run_end"},
}};

}  // namespace

std::string_view to_string(EventKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<EventKind> parse_event_kind(std::string_view text) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  return std::nullopt;
}

json event_to_json(const TraceEvent& event) {
  return {{"run_id", event.run_id},
          {"seq", event.seq},
          {"timestamp", event.timestamp},
          {"kind", to_string(event.kind)},
          {"payload", event.payload}};
}

TraceEvent event_from_json(const json& doc) {
  try {
    TraceEvent e;
    e.run_id = doc.at("run_id").get<std::string>();
    e.seq = doc.at("seq").get<std::int64_t>();
    e.timestamp = doc.at("timestamp").get<std::int64_t>();
    const auto kind = doc.at("kind").get<std::string>();
    const auto parsed = parse_event_kind(kind);
    if (!parsed) throw TelemetryError("unknown event kind '" + kind + "'");
    e.kind = *parsed;
    e.payload = doc.at("payload");
    return e;
  } catch (const json::exception& ex) {
    throw TelemetryError(std::string("malformed trace event: ") + ex.what());
  }
}

void TraceSink::append(const TraceEvent& event) {
  std::lock_guard lock(mutex_);
  auto [it, inserted] = next_seq_.try_emplace(event.run_id, 0);
  if (event.seq != it->second) {
    throw TelemetryError("run '" + event.run_id + "': expected sequence number " + std::to_string(it->second) +
                         ", got " + std::to_string(event.seq));
  }
  write(event);
  ++it->second;
}

void MemoryTraceSink::write(const TraceEvent& event) {
  std::lock_guard lock(mutex_);
  events_.push_back(event);
}

std::vector<TraceEvent> MemoryTraceSink::events() const {
  std::lock_guard lock(mutex_);
  return events_;
}

std::vector<TraceEvent> MemoryTraceSink::events_for(std::string_view run_id) const {
  std::lock_guard lock(mutex_);
  std::vector<TraceEvent> out;
  for (const auto& e : events_) {
    if (e.run_id == run_id) out.push_back(e);
  }
  return out;
}

JsonlTraceSink::JsonlTraceSink(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::out | std::ios::trunc);
  if (!out_) throw TelemetryError("cannot open trace file " + path.string());
  out_ << json{{"format", kTraceFormat}, {"version", kTraceVersion}}.dump() << '\n';
  out_.flush();
}

void JsonlTraceSink::write(const TraceEvent& event) {
  out_ << event_to_json(event).dump() << '\n';
  out_.flush();
  if (!out_) throw TelemetryError("failed to write trace event");
}

std::vector<TraceEvent> read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TelemetryError("cannot open trace file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw TelemetryError(path.string() + ": empty trace file");
  const json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || header.value("format", "") != kTraceFormat) {
    throw TelemetryError(path.string() + ": missing trace header");
  }
  if (header.value("version", 0) != kTraceVersion) {
    throw TelemetryError(path.string() + ": unsupported trace version");
  }
  std::vector<TraceEvent> events;
  std::map<std::string, std::int64_t> next;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded()) throw TelemetryError(path.string() + ":" + std::to_string(line_no) + ": invalid JSON");
    TraceEvent e = event_from_json(doc);
    auto& expected = next[e.run_id];
    if (e.seq != expected) {
      throw TelemetryError(path.string() + ":" + std::to_string(line_no) + ": sequence gap in run '" + e.run_id + "'");
    }
    ++expected;
    events.push_back(std::move(e));
  }
  return events;
}

TraceRecorder::TraceRecorder(std::string run_id, TraceSink* sink, bool wall_clock)
    : run_id_(std::move(run_id)), sink_(sink), wall_clock_(wall_clock) {}

const TraceEvent& TraceRecorder::emit(EventKind kind, json payload) {
  TraceEvent e;
  e.run_id = run_id_;
  e.seq = static_cast<std::int64_t>(events_.size());
  e.timestamp = wall_clock_ ? std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::system_clock::now().time_since_epoch())
                                  .count()
                            : e.seq;
  e.kind = kind;
  e.payload = std::move(payload);
  if (sink_) sink_->append(e);
  events_.push_back(std::move(e));
  return events_.back();
}

void TokenLedger::add(const std::string& run_id, Role role, const std::string& scope, const TokenUsage& usage) {
  cells_[Key{run_id, role, scope}] += usage;
}

TokenUsage TokenLedger::total() const {
  TokenUsage sum;
  for (const auto& [_, usage] : cells_) sum += usage;
  return sum;
}

TokenUsage TokenLedger::total_for(Role role) const {
  TokenUsage sum;
  for (const auto& [key, usage] : cells_) {
    if (std::get<1>(key) == role) sum += usage;
  }
  return sum;
}

TokenLedger TokenLedger::from_events(const std::vector<TraceEvent>& events) {
  TokenLedger ledger;
  for (const auto& e : events) {
    if (e.kind != EventKind::RoleCall) continue;
    const auto role = parse_role(e.payload.at("role").get<std::string>());
    if (!role) throw TelemetryError("role_call event with unknown role");
    ledger.add(e.run_id, *role, e.payload.at("scope").get<std::string>(),
               {e.payload.at("prompt_tokens").get<std::int64_t>(), e.payload.at("output_tokens").get<std::int64_t>()});
  }
  return ledger;
}

}  // namespace dagplan
