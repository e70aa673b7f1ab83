// Microbenchmarks for the hot paths: enumeration, coproducts, character
// convolution, cut-sum norms, comparison kernels and the numeric lift.

#include <benchmark/benchmark.h>

#include "branched/bounds.hpp"
#include "branched/character.hpp"
#include "branched/hopf.hpp"
#include "branched/lift.hpp"
#include "branched/poly.hpp"
#include "branched/trees.hpp"

using namespace branched;

namespace {

void bm_enumerate_trees(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto trees = enumerate_trees(n, 0);
        benchmark::DoNotOptimize(trees.size());
    }
}
BENCHMARK(bm_enumerate_trees)->Arg(6)->Arg(8)->Arg(10);

void bm_coproduct_lookup(benchmark::State& state) {
    // steady-state cost: the coproduct is memoized, so repeated access is
    // a locked cache lookup, which is what the verification loops pay
    int n = static_cast<int>(state.range(0));
    Tree t = single_vertex(1);
    for (int i = 1; i < n; ++i) t = join(Forest(t), 1);
    coproduct_tree(t);
    for (auto _ : state)
        benchmark::DoNotOptimize(coproduct_tree(t).size());
}
BENCHMARK(bm_coproduct_lookup)->Arg(8)->Arg(12);

void bm_graded_star(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    Character<Rational> X = random_rational_character(n, 0, 7);
    Character<Rational> Y = random_rational_character(n, 0, 8);
    std::vector<Forest> fs = enumerate_forests(n, 0);
    for (auto _ : state)
        for (const Forest& f : fs)
            benchmark::DoNotOptimize(graded_star_value(X, n - 1, Y, 1, f));
}
BENCHMARK(bm_graded_star)->Arg(5)->Arg(6);

void bm_cut_sum_log(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    std::vector<Tree> trees = enumerate_trees(n, 0);
    for (auto _ : state)
        for (const Tree& t : trees)
            benchmark::DoNotOptimize(
                cut_sum_over_trunk_log(t, Forest(), 0.7L, std::log(2.0L)));
}
BENCHMARK(bm_cut_sum_log)->Arg(6)->Arg(8);

void bm_kernel_value(benchmark::State& state) {
    for (auto _ : state)
        for (int n = 2; n <= 20; ++n)
            benchmark::DoNotOptimize(
                kernel_value(n, 2, 0.0L, 0.3L, 0.9L));
}
BENCHMARK(bm_kernel_value);

void bm_counterexample_point(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            counterexample_point(n, 0.5L, 2.0L, 0.5L, 1.0L));
}
BENCHMARK(bm_counterexample_point)->Arg(50)->Arg(200);

void bm_young_lift(benchmark::State& state) {
    PathData data = sample_polynomial(named_polynomial_path("parabola"),
                                      (1 << 10) + 1);
    for (auto _ : state) {
        YoungLift lift = lift_young(data, 3, 0, 6, 1e-7);
        benchmark::DoNotOptimize(lift.values.size());
    }
}
BENCHMARK(bm_young_lift);

}  // namespace

BENCHMARK_MAIN();
