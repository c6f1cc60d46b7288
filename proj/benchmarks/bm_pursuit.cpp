#include <benchmark/benchmark.h>

#include <mvdict/gabor.hpp>
#include <mvdict/ops.hpp>
#include <mvdict/pursuit.hpp>
#include <mvdict/rng.hpp>

using namespace mvdict;

namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(rows, cols);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.gaussian();
    return m;
}

KernelDictionary bench_dictionary(Index kernel_count, Index length, Index channels) {
    Rng rng(3);
    std::vector<ShiftKernel> kernels;
    for (Index l = 0; l < kernel_count; ++l)
        kernels.push_back(normalized_kernel(random_matrix(length, channels, 10 + l)));
    return make_dictionary(std::move(kernels));
}

}  // namespace

static void MompDecompose(benchmark::State& state) {
    const Index l = state.range(0);
    const Index k = state.range(1);
    const KernelDictionary dict = bench_dictionary(l, 40, 8);
    const Matrix signal = random_matrix(501, 8, 1);
    PursuitConfig config;
    config.variant = Variant::MOMP;
    config.sparsity = k;
    for (auto _ : state) {
        DecompositionResult res = momp_decompose(signal, dict, config);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(MompDecompose)->Args({5, 3})->Args({20, 5})->Args({60, 5});

static void Mmp1Decompose(benchmark::State& state) {
    GaborGrid grid = default_gabor_grid(256, static_cast<std::size_t>(state.range(0)));
    const GaborDictionary gabor = build_gabor_dictionary(grid);
    const Matrix signal = random_matrix(256, 8, 1);
    PursuitConfig config;
    config.variant = Variant::MMP1;
    config.sparsity = 5;
    for (auto _ : state) {
        DecompositionResult res = decompose(signal, gabor.atoms, config);
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(Mmp1Decompose)->Arg(1024)->Arg(4096);

static void GaborBuild(benchmark::State& state) {
    for (auto _ : state) {
        GaborDictionary dict = build_gabor_dictionary(
            default_gabor_grid(256, static_cast<std::size_t>(state.range(0))));
        benchmark::DoNotOptimize(dict);
    }
}
BENCHMARK(GaborBuild)->Arg(1024)->Arg(8192);

BENCHMARK_MAIN();
