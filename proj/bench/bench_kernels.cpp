// Serial reference kernels against their OpenMP counterparts.
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "biharm/kernels.hpp"

namespace k = biharm::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(gen);
    return v;
}

template <bool Parallel>
void weighted_dot(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto w = random_vector(n, 1), x = random_vector(n, 2), y = random_vector(n, 3);
    for (auto _ : state) {
        double d = Parallel ? k::parallel::weighted_dot(w, x, y) : k::serial::weighted_dot(w, x, y);
        benchmark::DoNotOptimize(d);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void max_abs_diff(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = random_vector(n, 4), y = random_vector(n, 5);
    for (auto _ : state) {
        double d = Parallel ? k::parallel::max_abs_diff(x, y) : k::serial::max_abs_diff(x, y);
        benchmark::DoNotOptimize(d);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void assemble_rhs(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto coeff = random_vector(n, 6), scale = random_vector(n, 7), u = random_vector(n, 8),
               source = random_vector(n, 9);
    std::vector<double> out(n);
    const auto f = [](double v) { return v * v; };
    for (auto _ : state) {
        if constexpr (Parallel) {
            k::parallel::assemble_rhs(coeff, scale, f, u, source, out);
        } else {
            k::serial::assemble_rhs(coeff, scale, f, u, source, out);
        }
        benchmark::DoNotOptimize(out.data());
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(weighted_dot<false>)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(weighted_dot<true>)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(max_abs_diff<false>)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(max_abs_diff<true>)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(assemble_rhs<false>)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(assemble_rhs<true>)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);

BENCHMARK_MAIN();
