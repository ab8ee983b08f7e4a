#include <benchmark/benchmark.h>

#include <string>

#include "dagplan/parsers.hpp"

namespace {

using namespace dagplan;

std::string plan_document(int steps) {
  std::string out;
  for (int i = 1; i <= steps; ++i) {
    if (i > 1) out += "\n\n";
    out += "## Step " + std::to_string(i) + "\nReasoning: Look up entity " + std::to_string(i) +
           ".\nStep: Search[Entity " + std::to_string(i) + "]";
  }
  return out;
}

void BM_ExtractJson(benchmark::State& state) {
  const std::string prose(static_cast<std::size_t>(state.range(0)), 'x');
  const std::string text = prose + " {not json} then ```json\n{\"status\": \"completed\", \"reason\": \"ok\", "
                                   "\"need_replan\": false}\n``` " + prose;
  for (auto _ : state) benchmark::DoNotOptimize(extract_json(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ExtractJson)->Range(64, 16384);

void BM_ParsePlan(benchmark::State& state) {
  const std::string text = plan_document(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(parse_plan(text));
}
BENCHMARK(BM_ParsePlan)->Range(1, 256);

void BM_ParseRevision(benchmark::State& state) {
  const std::string text =
      R"({"thought": "add a check", "need_update": true, "description_updates": )"
      R"([{"node_id": "node_2", "new_description": "Check the river name."}], "new_nodes": )"
      R"([{"description": "Verify spelling.", "dependencies": ["node_1"], "dependents": ["node_3"]}], )"
      R"("remove_nodes": []})";
  for (auto _ : state) benchmark::DoNotOptimize(parse_revision(text));
}
BENCHMARK(BM_ParseRevision);

}  // namespace
