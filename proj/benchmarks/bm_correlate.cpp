#include <benchmark/benchmark.h>

#include <mvdict/ops.hpp>
#include <mvdict/rng.hpp>

using namespace mvdict;

namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(rows, cols);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.gaussian();
    return m;
}

}  // namespace

static void CorrelateDirect(benchmark::State& state) {
    const Index n = state.range(0);
    const Index t = state.range(1);
    const Matrix residual = random_matrix(n, 8, 1);
    const Matrix kernel = random_matrix(t, 8, 2);
    CorrelationConfig config;
    config.direct_threshold = 1LL << 40;
    for (auto _ : state) {
        Vector corr = correlate_all_shifts(residual, kernel, config);
        benchmark::DoNotOptimize(corr);
    }
}
BENCHMARK(CorrelateDirect)->Args({256, 32})->Args({512, 64})->Args({2048, 128});

static void CorrelateFft(benchmark::State& state) {
    const Index n = state.range(0);
    const Index t = state.range(1);
    const Matrix residual = random_matrix(n, 8, 1);
    const Matrix kernel = random_matrix(t, 8, 2);
    CorrelationConfig config;
    config.direct_threshold = 0;
    for (auto _ : state) {
        Vector corr = correlate_all_shifts(residual, kernel, config);
        benchmark::DoNotOptimize(corr);
    }
}
BENCHMARK(CorrelateFft)->Args({256, 32})->Args({512, 64})->Args({2048, 128});
