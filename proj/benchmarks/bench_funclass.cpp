#include <benchmark/benchmark.h>

#include "funclass/classifiers.hpp"
#include "funclass/risk.hpp"
#include "funclass/rng.hpp"
#include "funclass/sequence_model.hpp"
#include "funclass/trajectory.hpp"

namespace {

using namespace funclass;

const SobolevSpec kSpec{1.0, 1.0};

ModelPair bench_pair(int D) {
  return make_pair_with_separation(kSpec, 1.0, 7, D);
}

void BM_sample_point_prefix(benchmark::State& state) {
  int dims = static_cast<int>(state.range(0));
  ModelPair pair = bench_pair(256);
  CoefVec x;
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_point_prefix(pair, dims, 11, i++, x));
  }
}
BENCHMARK(BM_sample_point_prefix)->Arg(1)->Arg(16)->Arg(256);

void BM_fit_plugin(benchmark::State& state) {
  long long n = state.range(0);
  ModelPair pair = bench_pair(64);
  Dataset data = sample_dataset(pair, static_cast<int>(n), 13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_plugin(data, 16));
  }
}
BENCHMARK(BM_fit_plugin)->Arg(256)->Arg(4096);

void BM_plugin_classify(benchmark::State& state) {
  ModelPair pair = bench_pair(64);
  Dataset data = sample_dataset(pair, 1024, 13);
  PluginModel model = fit_plugin(data, 16);
  CoefVec x;
  sample_point_prefix(pair, 16, 17, 0, x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(plugin_classify(model, x));
  }
}
BENCHMARK(BM_plugin_classify);

void BM_knn_classify(benchmark::State& state) {
  long long n = state.range(0);
  ModelPair pair = bench_pair(64);
  Dataset data = sample_dataset(pair, static_cast<int>(n), 13);
  KnnModel model = fit_knn(data, 4, optimal_k(n, 4));
  CoefVec x;
  sample_point_prefix(pair, 4, 17, 0, x);
  for (auto _ : state) {
    benchmark::DoNotOptimize(knn_classify(model, x));
  }
}
BENCHMARK(BM_knn_classify)->Arg(256)->Arg(4096);

void BM_synthesize_path(benchmark::State& state) {
  ModelPair pair = bench_pair(256);
  TimeGrid grid(2048);
  DriftTable table(pair, grid);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(synthesize_path(table, 1, seed++));
  }
}
BENCHMARK(BM_synthesize_path);

void BM_ito_coefficient(benchmark::State& state) {
  ModelPair pair = bench_pair(256);
  Path path = synthesize_path(pair, 1, TimeGrid(2048), 23);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ito_coefficient(path, 5));
  }
}
BENCHMARK(BM_ito_coefficient);

void BM_mc_excess_risk(benchmark::State& state) {
  ModelPair pair = bench_pair(256);
  Dataset data = sample_dataset(pair, 1024, 13);
  ClassifierRule rule = make_plugin_rule(fit_plugin(data, 10));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mc_excess_risk(rule, pair, 1000, 29));
  }
}
BENCHMARK(BM_mc_excess_risk);

}  // namespace

BENCHMARK_MAIN();
