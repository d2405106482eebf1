#include <benchmark/benchmark.h>

#include <vector>

#include "catlab/dynamics.hpp"
#include "catlab/mechanism.hpp"
#include "catlab/qre.hpp"

namespace {

catlab::GameParams params(double gamma, double alpha = 2.0) {
  catlab::GameParams p;
  p.gamma = gamma;
  p.alpha = alpha;
  return p;
}

void BM_CriticalTemperature(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(catlab::critical_temperature(0.185).t_c);
  }
}
BENCHMARK(BM_CriticalTemperature);

void BM_FindQreBilinear(benchmark::State& state) {
  const auto p = params(0.185);
  for (auto _ : state) {
    benchmark::DoNotOptimize(catlab::find_qre(0.25, p).min_root);
  }
}
BENCHMARK(BM_FindQreBilinear);

void BM_FindQreScan(benchmark::State& state) {
  const auto p = params(0.2, 6.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(catlab::find_qre(0.3, p).min_root);
  }
}
BENCHMARK(BM_FindQreScan);

void BM_Sweep500(benchmark::State& state) {
  std::vector<double> grid;
  for (int i = 0; i < 500; ++i) grid.push_back(0.5 * i / 499.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(catlab::sweep_correspondence(0.185, 2.0, grid).size());
  }
}
BENCHMARK(BM_Sweep500);

void BM_ConvergeToQre(benchmark::State& state) {
  const auto p = params(0.185);
  for (auto _ : state) {
    benchmark::DoNotOptimize(catlab::converge_to_qre(0.9, 0.25, p).terminal_x);
  }
}
BENCHMARK(BM_ConvergeToQre);

void BM_MechanismMinimal(benchmark::State& state) {
  const auto p = params(0.185);
  const auto schedule = catlab::build_schedule(p, catlab::ScheduleMode::Minimal, 0.05);
  for (auto _ : state) {
    benchmark::DoNotOptimize(catlab::run_mechanism(0.999, schedule, p).final_x);
  }
}
BENCHMARK(BM_MechanismMinimal);

void BM_DiscreteQLearning(benchmark::State& state) {
  const auto p = params(0.185);
  catlab::QLearningConfig cfg;
  cfg.delta = 0.1;
  cfg.steps = 10000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(catlab::discrete_q_learning(0.9, 0.1, p, cfg).terminal_x);
  }
}
BENCHMARK(BM_DiscreteQLearning);

}  // namespace

BENCHMARK_MAIN();
