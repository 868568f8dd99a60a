// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "bhmc/kernels.hpp"

using namespace bhmc;

namespace {

Matrix random_matrix(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = u(rng);
        m(i, i) += static_cast<double>(n);
    }
    return m;
}

template <kernels::Exec E>
void gemm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = random_matrix(n, 1), b = random_matrix(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::gemm(E, a, b));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n * n * n));
}

template <kernels::Exec E>
void apply_left(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix p = random_matrix(n, 3);
    std::vector<Matrix> in(32, random_matrix(n, 4)), out(32);
    for (auto _ : state) {
        kernels::apply_left(E, p, in, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <kernels::Exec E>
void lu_factor(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = random_matrix(n, 5);
    for (auto _ : state) {
        kernels::LuFactors f{a, {}};
        benchmark::DoNotOptimize(kernels::lu_factor(E, f, {}, 1e-300));
    }
}

}  // namespace

BENCHMARK(gemm<kernels::Exec::serial>)->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(gemm<kernels::Exec::parallel>)->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(apply_left<kernels::Exec::serial>)->RangeMultiplier(2)->Range(8, 64);
BENCHMARK(apply_left<kernels::Exec::parallel>)->RangeMultiplier(2)->Range(8, 64);
BENCHMARK(lu_factor<kernels::Exec::serial>)->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(lu_factor<kernels::Exec::parallel>)->RangeMultiplier(2)->Range(64, 512);

BENCHMARK_MAIN();
