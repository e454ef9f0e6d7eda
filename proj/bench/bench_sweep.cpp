// Serial reference sweep against the OpenMP sweep on the same problems.
//
//   bench_sweep --benchmark_filter=N2

#include "degenhj/value_solver.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>

using namespace degenhj;

namespace {

struct Case {
    GridSpec spec;
    TerminalData g;
    ControlSet controls;
};

Case make_case(std::size_t dim, std::size_t nx) {
    const double B = global_sqrt_kernel_bound(dim);
    Case c{{dim, -3.0, 3.0, nx, 1, 0.5}, clamped_distance_terminal(Vector::Constant(static_cast<Eigen::Index>(dim), 0.5), 2.0),
           ControlSet::standard(dim, 1.0, B)};
    c.spec.nt = cfl_time_slices(c.spec, c.controls, B);
    return c;
}

void report(benchmark::State& state, const Case& c) {
    const double updates = static_cast<double>(c.spec.nodes()) * static_cast<double>(c.spec.nt);
    state.counters["node_updates/s"] = benchmark::Counter(updates, benchmark::Counter::kIsIterationInvariantRate);
    state.counters["nt"] = static_cast<double>(c.spec.nt);
}

void BM_Reference(benchmark::State& state, std::size_t dim) {
    const Case c = make_case(dim, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve_reference(c.spec, c.g, c.controls));
    report(state, c);
}

void BM_OpenMP(benchmark::State& state, std::size_t dim) {
    const Case c = make_case(dim, static_cast<std::size_t>(state.range(0)));
    const int saved = omp_get_max_threads();
    omp_set_num_threads(static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(solve(c.spec, c.g, c.controls));
    omp_set_num_threads(saved);
    report(state, c);
    state.counters["threads"] = static_cast<double>(state.range(1));
}

void thread_args(benchmark::internal::Benchmark* b, std::initializer_list<int> sizes) {
    const int max_threads = omp_get_max_threads();
    for (int n : sizes) {
        for (int t = 1; t <= max_threads; t *= 2) b->Args({n, t});
        if ((max_threads & (max_threads - 1)) != 0) b->Args({n, max_threads});
    }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Reference, N1, 1)->Arg(1025)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_OpenMP, N1, 1)->Apply([](auto* b) { thread_args(b, {1025}); })->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Reference, N2, 2)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_OpenMP, N2, 2)->Apply([](auto* b) { thread_args(b, {65, 129}); })->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Reference, N3, 3)->Arg(17)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_OpenMP, N3, 3)->Apply([](auto* b) { thread_args(b, {17}); })->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
