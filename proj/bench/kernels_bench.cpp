// Serial references against the OpenMP kernels on the sizes the solvers use.
//   ./chronon_bench --benchmark_filter=exp_sum

#include "chronon/kernels/kernels.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

namespace {

using chronon::kernels::Complex;
namespace k = chronon::kernels;

struct ExpSumData {
    std::vector<Complex> coeff;
    std::vector<double> freq;
    std::vector<double> t;
    std::vector<Complex> out;

    ExpSumData(std::size_t nodes, std::size_t times) : coeff(nodes), freq(nodes), t(times), out(times) {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (std::size_t i = 0; i < nodes; ++i) {
            coeff[i] = {u(rng), u(rng)};
            freq[i] = 2.0 + u(rng);
        }
        for (std::size_t m = 0; m < times; ++m) t[m] = 0.05 * static_cast<double>(m);
    }
};

template <bool Parallel>
void BM_exp_sum(benchmark::State& state) {
    ExpSumData d(static_cast<std::size_t>(state.range(0)), 256);
    for (auto _ : state) {
        if constexpr (Parallel)
            k::exp_sum_omp(d.coeff, d.freq, d.t, d.out);
        else
            k::exp_sum_serial(d.coeff, d.freq, d.t, d.out);
        benchmark::DoNotOptimize(d.out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 256);
}

template <bool Parallel>
void BM_reduce(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    auto term = [](std::size_t i) { return std::sin(1e-3 * static_cast<double>(i)); };
    for (auto _ : state) {
        double s = Parallel ? k::reduce_omp<double>(n, term) : k::reduce_serial<double>(n, term);
        benchmark::DoNotOptimize(s);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_hadamard(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<Complex> a(n, Complex(1.0, 0.0));
    std::vector<Complex> f(n, std::polar(1.0, 1e-3));
    for (auto _ : state) {
        if constexpr (Parallel)
            k::hadamard_scale_omp(a, f);
        else
            k::hadamard_scale_serial(a, f);
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_axis_apply(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const int axis = static_cast<int>(state.range(1));
    std::vector<double> m(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) m[a * n + b] = 1.0 / (1.0 + static_cast<double>(a + b));
    std::vector<Complex> in(n * n * n, Complex(0.5, -0.25));
    std::vector<Complex> out(in.size());
    for (auto _ : state) {
        if constexpr (Parallel)
            k::axis_apply_omp(m, n, axis, in, out);
        else
            k::axis_apply_serial(m, n, axis, in, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n * n));
}

}  // namespace

BENCHMARK(BM_exp_sum<false>)->Name("exp_sum/serial")->Arg(1024)->Arg(16384);
BENCHMARK(BM_exp_sum<true>)->Name("exp_sum/omp")->Arg(1024)->Arg(16384)->UseRealTime();
BENCHMARK(BM_reduce<false>)->Name("reduce/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_reduce<true>)->Name("reduce/omp")->Arg(1 << 16)->Arg(1 << 20)->UseRealTime();
BENCHMARK(BM_hadamard<false>)->Name("hadamard/serial")->Arg(1 << 18);
BENCHMARK(BM_hadamard<true>)->Name("hadamard/omp")->Arg(1 << 18)->UseRealTime();
BENCHMARK(BM_axis_apply<false>)->Name("axis_apply/serial")->Args({32, 0})->Args({64, 2});
BENCHMARK(BM_axis_apply<true>)->Name("axis_apply/omp")->Args({32, 0})->Args({64, 2})->UseRealTime();

BENCHMARK_MAIN();
