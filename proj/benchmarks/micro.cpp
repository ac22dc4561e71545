// Wall-clock microbenchmarks. The complexity checks live in `gdlog bench`,
// which counts operations instead of timing them.

#include <benchmark/benchmark.h>

#include "gdlog/bench.hpp"
#include "gdlog/corpus.hpp"
#include "gdlog/engine.hpp"
#include "gdlog/storage.hpp"

namespace gdlog {
namespace {

void BM_RelationInsert(benchmark::State& state) {
  const auto n = static_cast<int64_t>(state.range(0));
  for (auto _ : state) {
    Relation r("g", 3);
    for (int64_t i = 0; i < n; ++i)
      r.insert(Tuple{Value::integer(i), Value::integer(i * 7 % n), Value::integer(i % 97)});
    benchmark::DoNotOptimize(r.size());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RelationInsert)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_RelationIndexedLookup(benchmark::State& state) {
  const auto n = static_cast<int64_t>(state.range(0));
  Relation r("g", 2);
  for (int64_t i = 0; i < n; ++i) r.insert(Tuple{Value::integer(i % 1000), Value::integer(i)});
  const size_t ix = r.ensure_index({0});
  int64_t k = 0;
  for (auto _ : state) {
    const Tuple key{Value::integer(k++ % 1000)};
    benchmark::DoNotOptimize(r.lookup(ix, key).size());
  }
}
BENCHMARK(BM_RelationIndexedLookup)->Arg(100'000);

// Insert n candidates keyed on column 0, then drain by repeated selection.
void BM_ThetaHeap(benchmark::State& state) {
  const auto n = static_cast<int64_t>(state.range(0));
  const bool pq = state.range(1) != 0;
  ThetaOptions o;
  o.mode = SelectMode::Least;
  o.cost_column = 1;
  o.priority_queue = pq;
  for (auto _ : state) {
    ThetaTable t({{{0}, {1}}}, 2, o);
    for (int64_t i = 0; i < n; ++i) t.insert(Tuple{Value::integer(i), Value::integer(i * 7919 % n)});
    while (t.select_extreme()) {
    }
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ThetaHeap)->Args({1000, 1})->Args({1000, 0})->Args({10'000, 1})->Unit(benchmark::kMicrosecond);

void run_example(benchmark::State& state, const char* example, GraphFamily family, EngineOptions opts) {
  const auto n = static_cast<size_t>(state.range(0));
  const Program p = corpus_program(example);
  const FactSet f = bench_input(example, n, family, 4.0, 1, 1000, 1);
  for (auto _ : state) benchmark::DoNotOptimize(run_with_counters(p, f, opts).counters.rule_firings);
}

void BM_PrimSparse(benchmark::State& state) {
  run_example(state, "prim", GraphFamily::SparseConnected, {});
}
BENCHMARK(BM_PrimSparse)->Arg(1000)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_DijkstraSparse(benchmark::State& state) {
  run_example(state, "dijkstra", GraphFamily::SparseConnected, {});
}
BENCHMARK(BM_DijkstraSparse)->Arg(1000)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_SortFactorized(benchmark::State& state) {
  EngineOptions o;
  o.factorize = true;
  o.pq = PqPolicy::On;
  run_example(state, "sort", GraphFamily::Complete, o);
}
BENCHMARK(BM_SortFactorized)->Arg(1000)->Arg(10'000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace gdlog

BENCHMARK_MAIN();
