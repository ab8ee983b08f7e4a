#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include "dagplan/errors.hpp"
#include "dagplan/telemetry.hpp"

using namespace dagplan;
using nlohmann::json;

namespace {

TraceEvent event(const std::string& run, std::int64_t seq, EventKind kind = EventKind::EnvStep,
                 json payload = json::object()) {
  return {run, seq, seq, kind, std::move(payload)};
}

std::filesystem::path scratch_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "dagplan_telemetry";
  std::filesystem::create_directories(dir);
  std::filesystem::remove(dir / name);
  return dir / name;
}

}  // namespace

TEST(EventKind, NamesRoundTrip) {
  for (auto k : {EventKind::GraphConstructed, EventKind::NodeDispatched, EventKind::RoleCall, EventKind::EnvStep,
                 EventKind::NodeStatus, EventKind::Replan, EventKind::Revision, EventKind::RunEnd}) {
    EXPECT_EQ(parse_event_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_event_kind("heartbeat").has_value());
}

TEST(TraceSink, AcceptsSeqZeroAndRejectsGaps) {
  MemoryTraceSink sink;
  EXPECT_NO_THROW(sink.append(event("r", 0)));
  EXPECT_NO_THROW(sink.append(event("r", 1)));
  EXPECT_THROW(sink.append(event("r", 3)), TelemetryError);
  EXPECT_THROW(sink.append(event("r", 1)), TelemetryError);
  EXPECT_THROW(sink.append(event("other", 1)), TelemetryError);
  EXPECT_NO_THROW(sink.append(event("r", 2)));
  EXPECT_EQ(sink.events().size(), 3u);
}

TEST(TraceSink, RunsAreIndependent) {
  MemoryTraceSink sink;
  sink.append(event("a", 0));
  sink.append(event("b", 0));
  sink.append(event("a", 1));
  EXPECT_EQ(sink.events_for("a").size(), 2u);
  EXPECT_EQ(sink.events_for("b").size(), 1u);
  EXPECT_TRUE(sink.events_for("c").empty());
}

TEST(TraceSink, ConcurrentRunsKeepTheirOrder) {
  MemoryTraceSink sink;
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&sink, t] {
      for (int i = 0; i < 250; ++i) sink.append(event("run" + std::to_string(t), i));
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(sink.events().size(), 2000u);
  for (int t = 0; t < 8; ++t) {
    const auto events = sink.events_for("run" + std::to_string(t));
    ASSERT_EQ(events.size(), 250u);
    for (int i = 0; i < 250; ++i) EXPECT_EQ(events[i].seq, i);
  }
}

TEST(JsonlTrace, ThousandEventsRoundTrip) {
  const auto path = scratch_file("round_trip.jsonl");
  std::vector<TraceEvent> written;
  {
    JsonlTraceSink sink(path);
    for (int i = 0; i < 1000; ++i) {
      const auto kind = static_cast<EventKind>(i % 8);
      TraceEvent e = event(i % 2 ? "odd" : "even", i / 2, kind,
                           {{"i", i}, {"text", "line\nbreak \"quoted\" é"}, {"nested", {{"x", i * 0.5}}}});
      sink.append(e);
      written.push_back(e);
    }
  }
  EXPECT_EQ(read_trace(path), written);
}

TEST(JsonlTrace, HeaderIsChecked) {
  const auto missing = scratch_file("no_header.jsonl");
  std::ofstream(missing) << event_to_json(event("r", 0)).dump() << "\n";
  EXPECT_THROW(read_trace(missing), TelemetryError);

  const auto wrong_version = scratch_file("v2.jsonl");
  std::ofstream(wrong_version) << R"({"format":"dagplan-trace","version":2})" << "\n";
  EXPECT_THROW(read_trace(wrong_version), TelemetryError);

  EXPECT_THROW(read_trace(scratch_file("absent.jsonl")), TelemetryError);
}

TEST(JsonlTrace, GapsInAFileAreRejected) {
  const auto path = scratch_file("gap.jsonl");
  std::ofstream out(path);
  out << R"({"format":"dagplan-trace","version":1})" << "\n";
  out << event_to_json(event("r", 0)).dump() << "\n" << event_to_json(event("r", 2)).dump() << "\n";
  out.close();
  EXPECT_THROW(read_trace(path), TelemetryError);
}

TEST(TraceRecorder, StampsLogicalTimeAndForwards) {
  MemoryTraceSink sink;
  TraceRecorder recorder("run-1", &sink);
  recorder.emit(EventKind::GraphConstructed, {{"n", 2}});
  const TraceEvent& second = recorder.emit(EventKind::RunEnd, json::object());
  EXPECT_EQ(second.seq, 1);
  EXPECT_EQ(second.timestamp, 1);
  EXPECT_EQ(recorder.events().size(), 2u);
  EXPECT_EQ(sink.events(), recorder.events());
}

TEST(TraceRecorder, WallClockIsMonotoneMilliseconds) {
  TraceRecorder recorder("run-1", nullptr, true);
  const auto first = recorder.emit(EventKind::EnvStep, json::object()).timestamp;
  const auto second = recorder.emit(EventKind::EnvStep, json::object()).timestamp;
  EXPECT_GT(first, 1'600'000'000'000);
  EXPECT_GE(second, first);
}

TEST(TokenLedger, SumsCellsAndRebuildsFromEvents) {
  TokenLedger ledger;
  ledger.add("r", Role::Planner, "node_1", {10, 2});
  ledger.add("r", Role::Planner, "node_1", {5, 1});
  ledger.add("r", Role::Executor, "node_1", {7, 3});
  ledger.add("r", Role::Supervisor, "global", {20, 9});
  EXPECT_EQ(ledger.cells().size(), 3u);
  EXPECT_EQ(ledger.total(), (TokenUsage{42, 15}));
  EXPECT_EQ(ledger.total_for(Role::Planner), (TokenUsage{15, 3}));

  std::vector<TraceEvent> events;
  std::int64_t seq = 0;
  for (const auto& [key, usage] : ledger.cells()) {
    events.push_back(event("r", seq++, EventKind::RoleCall,
                           {{"role", std::string(to_string(std::get<1>(key)))},
                            {"scope", std::get<2>(key)},
                            {"prompt_tokens", usage.prompt_tokens},
                            {"output_tokens", usage.output_tokens}}));
  }
  events.push_back(event("r", seq++, EventKind::EnvStep));
  EXPECT_EQ(TokenLedger::from_events(events).cells(), ledger.cells());
}
