#include <benchmark/benchmark.h>

#include "effint/biinterp.hpp"
#include "effint/collapse.hpp"
#include "effint/stock.hpp"
#include "effint/transforms.hpp"

namespace {

using namespace effint;

void BM_CollapseRepresentatives(benchmark::State& state) {
  const auto scheme = pairs_intersect_scheme();
  const PresentationOracle oracle(pure_set());
  for (auto _ : state) {
    CollapseTable table(scheme, oracle);
    benchmark::DoNotOptimize(table.representative(static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_CollapseRepresentatives)->Arg(8)->Arg(32)->Arg(128);

void BM_DomScan(benchmark::State& state) {
  const auto F = interp_to_functor(pairs_intersect_scheme());
  const auto base = pure_set();
  const auto tuples = tuples_within({3, 4});
  for (auto _ : state) {
    std::size_t in = 0;
    for (const auto& b : tuples) {
      for (Elem i = 0; i < 5; ++i) in += dom_contains(F, base, b, i, 1u << 22).verdict == Verdict::In;
    }
    benchmark::DoNotOptimize(in);
  }
}
BENCHMARK(BM_DomScan)->Unit(benchmark::kMillisecond);

void BM_EquivDecide(benchmark::State& state) {
  const auto F = interp_to_functor(pairs_intersect_scheme());
  const auto base = pure_set();
  const DomPoint p{{0, 1, 2}, 0, 0};
  const DomPoint q{{2, 3, 1}, 1, 0};
  EquivBudget budget;
  budget.strict = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(equiv_decide(F, p, q, base, budget).verdict);
}
BENCHMARK(BM_EquivDecide)->Arg(0)->Arg(1);

void BM_RoundTripLambda(benchmark::State& state) {
  const auto F = interp_to_functor(pairs_intersect_scheme());
  const auto base = pure_set();
  for (auto _ : state) {
    LambdaEvaluator L(F);
    for (Elem i = 0; i < static_cast<Elem>(state.range(0)); ++i) {
      benchmark::DoNotOptimize(L.lambda(base, i, 1u << 22));
    }
  }
}
BENCHMARK(BM_RoundTripLambda)->Arg(4)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_BiLambda(benchmark::State& state) {
  const auto d = identity_biinterp(linear_order());
  const auto t = biinterp_to_bitransform(d);
  const auto triple = OracleTriple::diagram(DiagramSource::total(d.a_base));
  for (auto _ : state) {
    for (Elem a = 0; a < 10; ++a) benchmark::DoNotOptimize(run_total(t.lambdaA, triple, a, 1u << 24));
  }
}
BENCHMARK(BM_BiLambda)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
