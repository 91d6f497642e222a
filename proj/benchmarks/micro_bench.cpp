#include <benchmark/benchmark.h>

#include "steiner/approx.hpp"
#include "steiner/exact.hpp"
#include "steiner/generators.hpp"
#include "steiner/gnn/model.hpp"
#include "steiner/mcts.hpp"
#include "steiner/shortest_paths.hpp"

namespace {

using namespace steiner;

SteinerInstance bench_instance(GraphModel model, int n, int terminal_count, bool weighted) {
    GeneratorConfig config;
    config.model = model;
    config.n = n;
    config.terminal_count = terminal_count;
    config.weighted = weighted;
    config.seed = 99;
    return generate(config);
}

void BM_ShortestPaths(benchmark::State& state) {
    const auto inst =
        bench_instance(GraphModel::erdos_renyi, static_cast<int>(state.range(0)), 4, true);
    for (auto _ : state) {
        benchmark::DoNotOptimize(shortest_paths(inst, 0));
    }
}
BENCHMARK(BM_ShortestPaths)->Arg(20)->Arg(50)->Arg(80);

void BM_TwoApproximation(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto inst = bench_instance(GraphModel::erdos_renyi, n, n / 5, true);
    for (auto _ : state) {
        benchmark::DoNotOptimize(two_approximation(inst));
    }
}
BENCHMARK(BM_TwoApproximation)->Arg(20)->Arg(50)->Arg(80);

void BM_ExactSolve(benchmark::State& state) {
    const auto inst = bench_instance(GraphModel::erdos_renyi, 20,
                                     static_cast<int>(state.range(0)), true);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_solve(inst));
    }
}
BENCHMARK(BM_ExactSolve)->Arg(4)->Arg(6)->Arg(8)->Arg(10);

void BM_GnnForward(benchmark::State& state) {
    const auto inst = bench_instance(GraphModel::geometric, 20, 10, true);
    gnn::ModelConfig config;
    config.embed_dim = static_cast<int>(state.range(0));
    config.edge_dim = config.embed_dim;
    const gnn::GnnModel model(config, 7);
    const auto in_partial = gnn::partial_flags(inst, {});
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.forward_eval(inst, in_partial));
    }
}
BENCHMARK(BM_GnnForward)->Arg(32)->Arg(64)->Arg(128);

void BM_Search(benchmark::State& state) {
    const auto inst = bench_instance(GraphModel::geometric, 20, 10, true);
    gnn::ModelConfig model_config;
    const gnn::GnnModel model(model_config, 7);
    SearchConfig config;
    config.simulations = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_search(inst, model, config));
    }
}
BENCHMARK(BM_Search)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
