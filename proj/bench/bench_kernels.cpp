// Each OpenMP kernel against its serial reference. The parallel variants take
// the worker cap as the benchmark argument.

#include <benchmark/benchmark.h>

#include "deplens/centrality.hpp"
#include "deplens/module_analysis.hpp"
#include "deplens/parallel.hpp"
#include "deplens/robustness.hpp"
#include "deplens/serial_reference.hpp"
#include "support/graphs.hpp"

using namespace deplens;

namespace {

const DepGraph& dag() {
    static const auto g = support::random_dag(2000, 0.004, 1);
    return g;
}

const DepGraph& citations() {
    static const auto g = support::preferential_attachment(20000, 4, 2);
    return g;
}

const DepGraph& sparse() {
    static const auto g = support::random_digraph(1500, 0.003, 3);
    return g;
}

const std::vector<double> kFractions{0.0, 0.05, 0.1, 0.2, 0.3, 0.5};

/// Sets the worker cap from the first argument for one benchmark run.
struct Workers {
    int before = max_threads();
    explicit Workers(const benchmark::State& s) { set_threads(static_cast<int>(s.range(0))); }
    ~Workers() { set_threads(before); }
};

void BM_RedundantEdges(benchmark::State& s) {
    Workers w(s);
    for (auto _ : s) benchmark::DoNotOptimize(redundant_edges(dag()));
}
void BM_RedundantEdgesSerial(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(serial::redundant_edges(dag()));
}

void BM_PageRank(benchmark::State& s) {
    Workers w(s);
    for (auto _ : s) benchmark::DoNotOptimize(pagerank(citations()));
}
void BM_PageRankSerial(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(serial::pagerank(citations()));
}

void BM_Betweenness(benchmark::State& s) {
    Workers w(s);
    for (auto _ : s) benchmark::DoNotOptimize(betweenness(sparse()));
}
void BM_BetweennessSerial(benchmark::State& s) {
    for (auto _ : s) benchmark::DoNotOptimize(serial::betweenness(sparse()));
}

void BM_RandomRemoval(benchmark::State& s) {
    Workers w(s);
    for (auto _ : s)
        benchmark::DoNotOptimize(removal_curve(citations(), {RemovalKind::random, {}}, kFractions, 8, 5));
}
void BM_RandomRemovalSerial(benchmark::State& s) {
    for (auto _ : s)
        benchmark::DoNotOptimize(serial::removal_curve(citations(), {RemovalKind::random, {}}, kFractions, 8, 5));
}

}  // namespace

BENCHMARK(BM_RedundantEdges)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RedundantEdgesSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PageRank)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_PageRankSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Betweenness)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BetweennessSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RandomRemoval)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RandomRemovalSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
