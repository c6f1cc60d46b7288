#include <mvdict/experiments.hpp>

#include <mvdict/evoked.hpp>
#include <mvdict/ops.hpp>
#include <mvdict/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace mvdict {

SweepCell shift_robustness_cell(const SweepConfig& config, double sigma, int repetition) {
    const Index t = config.pattern_length;
    const Index n = config.epoch_length;
    const Matrix reference = reference_ep_pattern(t, config.channels);

    SimulationSpec spec;
    spec.reference = reference;
    spec.trials = config.trials;
    spec.epoch_length = n;
    spec.shift_mean = static_cast<double>((n - t) / 2);
    spec.shift_std = sigma;
    spec.snr_db = config.snr_db;
    spec.noise = FirNoiseModel::default_model(config.channels, config.noise_spatial_decay);
    if (!config.noise_taps.empty()) {
        spec.noise.taps =
            Eigen::Map<const Vector>(config.noise_taps.data(),
                                     static_cast<Index>(config.noise_taps.size()));
    }
    spec.sample_rate = config.sample_rate;
    spec.rng_seed = Rng::derive(config.seed,
                                0x5157ULL + static_cast<std::uint64_t>(repetition) * 131ULL +
                                    static_cast<std::uint64_t>(std::llround(sigma * 16.0)));

    auto [epochs, truth] = generate_trials(spec);

    const EvokedPattern ga = grand_average(epochs);
    const EvokedPattern ga_pattern = truncate_and_normalize(ga, t);

    // The shift search must cover the planted spread, and stay at least as
    // wide as the 9-point protocol window: a warm start misaligned by a few
    // samples would otherwise park every optimal shift on the interval edge
    // and the edge-skip rule would starve the learning.
    const Index center = static_cast<Index>(std::llround(spec.shift_mean));
    const Index halfwidth = std::min<Index>(
        std::max<Index>(4, static_cast<Index>(std::llround(3.0 * sigma)) + 2),
        std::min<Index>(center, n - t - center));
    const double center_ms =
        static_cast<double>(center + t / 2) / spec.sample_rate * 1000.0;

    const EvokedPattern learned =
        learn_ep_kernel(epochs, ga, t, center_ms, halfwidth, config.iterations, config.eta0,
                        Rng::derive(spec.rng_seed, 0xd1a));

    SweepCell cell;
    cell.ga = max_correlation(ga_pattern.waveform, reference);
    cell.mdla = max_correlation(learned.waveform, reference);
    return cell;
}

std::vector<SweepRow> shift_robustness_sweep(const SweepConfig& config) {
    if (config.sigmas.empty()) throw ConfigError("sweep needs at least one sigma");
    if (config.repetitions < 1) throw ConfigError("sweep needs at least one repetition");

    const std::size_t cells =
        config.sigmas.size() * static_cast<std::size_t>(config.repetitions);
    std::vector<SweepCell> results(cells);
    parallel_for(cells, [&](std::size_t i) {
        const std::size_t s = i / static_cast<std::size_t>(config.repetitions);
        const int rep = static_cast<int>(i % static_cast<std::size_t>(config.repetitions));
        results[i] = shift_robustness_cell(config, config.sigmas[s], rep);
    });

    std::vector<SweepRow> rows;
    rows.reserve(config.sigmas.size());
    for (std::size_t s = 0; s < config.sigmas.size(); ++s) {
        SweepRow row;
        row.sigma = config.sigmas[s];
        for (int rep = 0; rep < config.repetitions; ++rep) {
            const SweepCell& cell =
                results[s * static_cast<std::size_t>(config.repetitions) +
                        static_cast<std::size_t>(rep)];
            row.mean_ga += cell.ga;
            row.mean_mdla += cell.mdla;
        }
        row.mean_ga /= config.repetitions;
        row.mean_mdla /= config.repetitions;
        rows.push_back(row);
    }
    return rows;
}

KernelDictionary random_smooth_dictionary(Index kernel_count, Index length, Index channels,
                                          Rng& rng) {
    // White noise under a Hann envelope, smoothed by a short moving average:
    // compact, band-limited waveforms that are almost orthogonal in T x C.
    std::vector<ShiftKernel> kernels;
    kernels.reserve(static_cast<std::size_t>(kernel_count));
    const Index smooth = std::max<Index>(2, length / 8);
    for (Index l = 0; l < kernel_count; ++l) {
        Matrix raw(length, channels);
        for (Index i = 0; i < raw.size(); ++i) raw.data()[i] = rng.gaussian();
        Matrix w = Matrix::Zero(length, channels);
        for (Index i = 0; i < length; ++i) {
            const Index lo = std::max<Index>(0, i - smooth);
            const Index hi = std::min<Index>(length - 1, i + smooth);
            w.row(i) = raw.middleRows(lo, hi - lo + 1).colwise().mean();
            const double hann =
                0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                     static_cast<double>(length - 1));
            w.row(i) *= hann;
        }
        kernels.push_back(normalized_kernel(std::move(w)));
    }
    return make_dictionary(std::move(kernels));
}

double dictionary_assignment_correlation(const KernelDictionary& learned,
                                         const KernelDictionary& reference) {
    const Index l = reference.size();
    if (learned.size() != l) throw ShapeError("dictionaries must have equal kernel counts");
    Matrix score(l, l);
    for (Index i = 0; i < l; ++i)
        for (Index j = 0; j < l; ++j)
            score(i, j) = max_correlation(learned.kernels[static_cast<std::size_t>(i)].waveform,
                                          reference.kernels[static_cast<std::size_t>(j)].waveform);

    // Exhaustive best assignment; L stays single-digit in the protocols.
    std::vector<Index> perm(static_cast<std::size_t>(l));
    std::iota(perm.begin(), perm.end(), 0);
    double best = -1.0;
    do {
        double total = 0.0;
        for (Index i = 0; i < l; ++i) total += score(i, perm[static_cast<std::size_t>(i)]);
        best = std::max(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best / static_cast<double>(l);
}

PlantedResult planted_recovery(const PlantedConfig& config) {
    Rng rng(Rng::derive(config.seed, 0x91a7));
    PlantedResult result;
    result.planted = random_smooth_dictionary(config.kernel_count, config.kernel_length,
                                              config.channels, rng);

    const Index n = config.epoch_length;
    const Index t = config.kernel_length;
    const FirNoiseModel noise_model = FirNoiseModel::default_model(config.channels);

    std::vector<Matrix> epochs;
    epochs.reserve(static_cast<std::size_t>(config.trials));
    for (Index p = 0; p < config.trials; ++p) {
        Rng stream(Rng::derive(config.seed, 0xbeef00ULL + static_cast<std::uint64_t>(p)));
        Matrix trial = Matrix::Zero(n, config.channels);
        for (Index k = 0; k < config.sparsity; ++k) {
            const Index kernel =
                static_cast<Index>(stream.next_below(static_cast<std::uint64_t>(config.kernel_count)));
            const Index shift =
                static_cast<Index>(stream.next_below(static_cast<std::uint64_t>(n - t + 1)));
            const double amplitude = 0.75 + 0.5 * stream.uniform();
            trial += amplitude *
                     instantiate_atom(result.planted.kernels[static_cast<std::size_t>(kernel)],
                                      shift, n);
        }
        if (std::isfinite(config.snr_db)) {
            const Matrix noise = correlated_noise(n, config.channels, noise_model, stream);
            trial += scale_to_snr(trial, noise, config.snr_db);
        }
        epochs.push_back(std::move(trial));
    }
    result.trials = make_epoch_set(std::move(epochs), 1.0);

    LearnConfig learn;
    learn.kernel_count = config.kernel_count;
    learn.iterations = config.iterations;
    learn.sparsity = config.sparsity;
    learn.initial_length = t;
    learn.limit_length = t;
    learn.adapt_lengths = false;
    learn.eta0 = config.eta0;
    learn.rng_seed = Rng::derive(config.seed, 0x1ea2);
    auto [dict, trace] = mdla_train(result.trials, learn);
    result.learned = std::move(dict);
    result.mean_assignment_correlation =
        dictionary_assignment_correlation(result.learned, result.planted);
    return result;
}

}  // namespace mvdict
