#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "effhmm/inference.hpp"

namespace {

using namespace effhmm;

void BM_Forward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto t = static_cast<std::size_t>(state.range(1));
  const Model model = init_model(n, 3, Variant::EvidenceFeedForward, 1);
  const auto obs = bench::random_sequence(3, t, 2);
  for (auto _ : state) benchmark::DoNotOptimize(forward(model, obs).log_likelihood);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * t));
}
BENCHMARK(BM_Forward)->ArgsProduct({{3, 8, 32}, {120, 10000}});

void BM_ForwardBackward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto t = static_cast<std::size_t>(state.range(1));
  const Model model = init_model(n, 3, Variant::EvidenceFeedForward, 1);
  const auto obs = bench::random_sequence(3, t, 2);
  for (auto _ : state) {
    const auto trellis = forward(model, obs);
    benchmark::DoNotOptimize(backward(model, obs, trellis).beta_hat.values().data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * t));
}
BENCHMARK(BM_ForwardBackward)->ArgsProduct({{3, 8, 32}, {120, 10000}});

void BM_Viterbi(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Model model = init_model(n, 3, Variant::EvidenceFeedForward, 1);
  const auto obs = bench::random_sequence(3, 1000, 2);
  for (auto _ : state) benchmark::DoNotOptimize(viterbi(model, obs).log_probability);
}
BENCHMARK(BM_Viterbi)->Arg(3)->Arg(8)->Arg(32);

}  // namespace
