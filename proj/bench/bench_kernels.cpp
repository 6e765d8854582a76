// OpenMP kernels against the serial reference on square sizes.

#include <benchmark/benchmark.h>

#include <vector>

#include "specfam/kernels.hpp"
#include "specfam/random.hpp"

using namespace specfam;

namespace {

template <Field T>
std::vector<T> filled(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<T> v(n);
    for (auto& x : v) x = gaussian<T>(rng);
    return v;
}

template <Field T, bool Parallel>
void bm_gemm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = filled<T>(n * n, 1), b = filled<T>(n * n, 2);
    std::vector<T> c(n * n);
    for (auto _ : state) {
        if constexpr (Parallel) kernels::gemm<T>(a, b, c, n, n, n);
        else kernels::reference::gemm<T>(a, b, c, n, n, n);
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n * n));
}

template <Field T, bool Parallel>
void bm_gemm_adjoint(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = filled<T>(n * n, 3), b = filled<T>(n * n, 4);
    std::vector<T> c(n * n);
    for (auto _ : state) {
        if constexpr (Parallel) kernels::gemm_adjoint<T>(a, b, c, n, n, n);
        else kernels::reference::gemm_adjoint<T>(a, b, c, n, n, n);
        benchmark::DoNotOptimize(c.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n * n));
}

template <Field T, bool Parallel>
void bm_gemv(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = filled<T>(n * n, 5), x = filled<T>(n, 6);
    std::vector<T> y(n);
    for (auto _ : state) {
        if constexpr (Parallel) kernels::gemv<T>(a, x, y, n, n);
        else kernels::reference::gemv<T>(a, x, y, n, n);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n));
}

}  // namespace

BENCHMARK(bm_gemm<double, false>)->RangeMultiplier(2)->Range(16, 256);
BENCHMARK(bm_gemm<double, true>)->RangeMultiplier(2)->Range(16, 256);
BENCHMARK(bm_gemm<Complex, false>)->RangeMultiplier(2)->Range(16, 256);
BENCHMARK(bm_gemm<Complex, true>)->RangeMultiplier(2)->Range(16, 256);
BENCHMARK(bm_gemm_adjoint<double, false>)->RangeMultiplier(2)->Range(16, 256);
BENCHMARK(bm_gemm_adjoint<double, true>)->RangeMultiplier(2)->Range(16, 256);
BENCHMARK(bm_gemv<double, false>)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(bm_gemv<double, true>)->RangeMultiplier(4)->Range(64, 4096);

BENCHMARK_MAIN();
