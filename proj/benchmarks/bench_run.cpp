#include <benchmark/benchmark.h>

#include "dagplan/config.hpp"
#include "dagplan/engine.hpp"
#include "dagplan/fixtures.hpp"

namespace {

using namespace dagplan;

// Full scripted runs over the toy3 fixtures; measures controller overhead
// without any model latency.
void BM_RunToy3(benchmark::State& state) {
  const LoadedConfig config = load_config(DAGPLAN_SOURCE_DIR "/configs/scripted_toy3.json");
  const auto tasks = load_task_set(DAGPLAN_SOURCE_DIR "/fixtures/toy3");
  const Method method = static_cast<Method>(state.range(0));
  state.SetLabel(std::string(to_string(method)));
  for (auto _ : state) {
    for (const auto& task : tasks) {
      auto env = make_environment(task.environment);
      benchmark::DoNotOptimize(run_method(method, task, *env, config.run));
    }
  }
}
BENCHMARK(BM_RunToy3)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

}  // namespace
