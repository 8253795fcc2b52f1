#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "effhmm/learning.hpp"

namespace {

using namespace effhmm;

std::vector<ObservationSequence> batch(std::size_t count, std::size_t length) {
  std::vector<ObservationSequence> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(bench::random_sequence(3, length, 100 + i));
  return out;
}

// One E step plus M step over a batch of sequences.
void BM_EmStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto count = static_cast<std::size_t>(state.range(1));
  const auto data = batch(count, 60);
  Model model = init_model(n, 3, Variant::EvidenceFeedForward, 7);
  for (auto _ : state) {
    const auto stats = accumulate_stats(model, data);
    benchmark::DoNotOptimize(reestimate(stats, Variant::EvidenceFeedForward, 1e-6));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * count * 60));
}
BENCHMARK(BM_EmStep)->ArgsProduct({{3, 8}, {10, 100}});

void BM_IrisScaleTraining(benchmark::State& state) {
  const auto data = batch(10, 3);
  TrainConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(em_train(data, config).report.iterations_run);
}
BENCHMARK(BM_IrisScaleTraining);

}  // namespace
