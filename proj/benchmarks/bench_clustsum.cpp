#include <benchmark/benchmark.h>

#include <random>

#include "clustsum/credible_ball.hpp"
#include "clustsum/dpm.hpp"
#include "clustsum/greedy.hpp"

using namespace clustsum;

namespace {

Partition random_partition(std::mt19937_64& rng, std::size_t n, int k) {
  std::uniform_int_distribution<int> label(0, k - 1);
  std::vector<int> labels(n);
  for (auto& l : labels) l = label(rng);
  return Partition::from_labels(labels);
}

DrawMatrix random_draws(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto base = random_partition(rng, n, 4);
  std::vector<Partition> rows;
  std::uniform_int_distribution<std::size_t> item(0, n - 1);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<int> labels(base.labels().begin(), base.labels().end());
    for (int j = 0; j < 5; ++j) labels[item(rng)] = static_cast<int>(4 + rng() % 4);
    rows.push_back(Partition::from_labels(labels));
  }
  return DrawMatrix(std::move(rows));
}

void BM_Distance(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_partition(rng, n, 8);
  const auto b = random_partition(rng, n, 12);
  const auto metric = state.range(1) ? MetricKind::vi : MetricKind::binder;
  for (auto _ : state) benchmark::DoNotOptimize(distance(metric, a, b));
}
BENCHMARK(BM_Distance)->ArgsProduct({{50, 200, 1000}, {0, 1}});

void BM_ClosestNeighbors(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto c = random_partition(rng, 200, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(closest_neighbors(c, MetricKind::vi, 200, 7));
  }
}
BENCHMARK(BM_ClosestNeighbors)->Arg(4)->Arg(10)->Arg(30);

void BM_TrackedMoveScore(benchmark::State& state) {
  const auto draws = random_draws(200, static_cast<std::size_t>(state.range(0)), 3);
  ExactViTracker tracker(draws);
  tracker.reset(draws[0]);
  const auto moves = closest_neighbors(draws[0], MetricKind::vi, 50, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tracker.loss_after(moves[i]));
    i = (i + 1) % moves.size();
  }
}
BENCHMARK(BM_TrackedMoveScore)->Arg(1000)->Arg(10000);

void BM_GreedySearch(benchmark::State& state) {
  const auto draws = random_draws(200, 2000, 4);
  SearchConfig config;
  config.metric = state.range(0) ? MetricKind::vi : MetricKind::binder;
  config.init = InitMode::last_draw;
  for (auto _ : state) benchmark::DoNotOptimize(greedy_search(draws, config));
}
BENCHMARK(BM_GreedySearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GibbsSweep(benchmark::State& state) {
  const auto sim = simulate_example(SimulatedExample::example1,
                                    static_cast<std::size_t>(state.range(0)), 1);
  auto config = standard_config(2);
  config.seed = 1;
  GibbsSampler sampler(sim.data, config);
  for (int i = 0; i < 50; ++i) sampler.sweep();
  for (auto _ : state) sampler.sweep();
}
BENCHMARK(BM_GibbsSweep)->Arg(200)->Arg(1000);

void BM_CredibleBall(benchmark::State& state) {
  const auto draws = random_draws(200, 10000, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(credible_ball(draws[0], draws, 0.05, MetricKind::vi));
  }
}
BENCHMARK(BM_CredibleBall)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
