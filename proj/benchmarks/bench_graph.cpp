#include <benchmark/benchmark.h>

#include <random>

#include "dagplan/graph.hpp"

namespace {

using namespace dagplan;

// Layered graph: every node depends on up to three nodes of the previous layer.
TaskGraph layered_graph(int nodes, int width, int completed) {
  TaskGraph g("bench");
  std::mt19937_64 rng(42);
  auto name = [](int i) { return "node_" + std::to_string(i + 1); };
  for (int i = 0; i < nodes; ++i) {
    SubTaskNode n{NodeId(name(i)), "step " + std::to_string(i), {}};
    const int layer_start = (i / width - 1) * width;
    for (int k = 0; k < 3 && layer_start >= 0; ++k) n.dependencies.insert(NodeId(name(layer_start + rng() % width)));
    g.add_node(std::move(n));
  }
  for (int i = 0; i < completed; ++i) {
    const NodeId id(name(i));
    g.start(id);
    g.finish(id, OutcomeSummary{NodeStatus::Completed, "ok", {}});
  }
  return g;
}

void BM_ReadyNodes(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const TaskGraph g = layered_graph(n, 8, n / 2);
  for (auto _ : state) benchmark::DoNotOptimize(ready_nodes(g));
  state.SetComplexityN(n);
}
BENCHMARK(BM_ReadyNodes)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_ValidateGraph(benchmark::State& state) {
  const TaskGraph g = layered_graph(static_cast<int>(state.range(0)), 8, 0);
  for (auto _ : state) benchmark::DoNotOptimize(validate_graph(g));
}
BENCHMARK(BM_ValidateGraph)->RangeMultiplier(4)->Range(16, 4096);

void BM_ApplyRevision(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const TaskGraph g = layered_graph(n, 8, 0);
  RevisionDelta delta;
  delta.need_update = true;
  delta.description_updates.push_back({NodeId("node_1"), "revised first step"});
  delta.new_nodes.push_back({std::nullopt, "inserted step", {NodeId("node_1")}, {NodeId("node_" + std::to_string(n))}});
  for (auto _ : state) benchmark::DoNotOptimize(apply_revision(g, delta));
}
BENCHMARK(BM_ApplyRevision)->RangeMultiplier(4)->Range(16, 1024);

}  // namespace
