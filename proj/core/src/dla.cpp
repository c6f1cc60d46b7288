#include <mvdict/dla.hpp>

#include <mvdict/metrics.hpp>
#include <mvdict/ops.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mvdict {

namespace {

// Highest-energy window of a signal; an energy peak usually holds one
// dominant event rather than background.
Index max_energy_window_start(const Matrix& samples, Index length) {
    Index best_start = 0;
    double best = -1.0;
    double energy = samples.topRows(length).squaredNorm();
    for (Index start = 0;; ++start) {
        if (energy > best) {
            best = energy;
            best_start = start;
        }
        if (start + length >= samples.rows()) break;
        energy += samples.row(start + length).squaredNorm() - samples.row(start).squaredNorm();
    }
    return best_start;
}

Matrix random_trial_window(const EpochSet& trials, Index length, Rng& rng) {
    const Index p = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(trials.count())));
    const Matrix& trial = trials.epochs[static_cast<std::size_t>(p)];
    return trial.middleRows(max_energy_window_start(trial, length), length);
}

ShiftKernel kernel_from_window(Matrix window, Rng& rng) {
    double norm = window.norm();
    while (!(norm > 1e-12)) {
        // Degenerate (silent) window: fall back to noise so the kernel
        // stays usable.
        for (Index i = 0; i < window.size(); ++i) window.data()[i] = rng.gaussian();
        norm = window.norm();
    }
    return ShiftKernel{window / norm};
}

}  // namespace

KernelDictionary init_dictionary(const EpochSet& trials, Index kernel_count,
                                 Index initial_length, Rng& rng) {
    if (kernel_count < 1) throw ConfigError("kernel count must be at least 1");
    if (initial_length > trials.length())
        throw ConfigError("initial kernel length exceeds the trial length");
    std::vector<ShiftKernel> kernels;
    kernels.reserve(static_cast<std::size_t>(kernel_count));
    for (Index l = 0; l < kernel_count; ++l)
        kernels.push_back(kernel_from_window(random_trial_window(trials, initial_length, rng), rng));
    return make_dictionary(std::move(kernels));
}

KernelDictionary dictionary_update_step(KernelDictionary dict, const Matrix& trial,
                                        const SparseCode& code, double eta, Rng& rng,
                                        bool* reinitialized) {
    if (reinitialized) *reinitialized = false;
    if (code.entries.empty()) return dict;

    const Index n = trial.rows();
    const Matrix residual = trial - synthesize(dict, code, n);

    // Accumulate the gradient of ||y - Phi x||^2 per used kernel: each code
    // entry contributes coefficient * residual window at its shift.
    std::vector<Matrix> gradient(dict.kernels.size());
    std::vector<bool> used(dict.kernels.size(), false);
    for (const auto& e : code.entries) {
        const std::size_t l = static_cast<std::size_t>(e.kernel);
        const Index t = dict.kernels[l].length();
        if (!used[l]) {
            gradient[l] = Matrix::Zero(t, dict.channels());
            used[l] = true;
        }
        gradient[l] += e.coefficient * residual.middleRows(e.shift, t);
    }

    for (std::size_t l = 0; l < dict.kernels.size(); ++l) {
        if (!used[l]) continue;
        Matrix updated = dict.kernels[l].waveform + eta * gradient[l];
        const double norm = updated.norm();
        if (norm > 1e-12) {
            dict.kernels[l].waveform = updated / norm;
        } else {
            // Collapsed kernel: reseed from the trial itself.
            Matrix window = Matrix::Zero(dict.kernels[l].length(), trial.cols());
            const Index max_start = n - dict.kernels[l].length();
            const Index start = max_start > 0
                ? static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(max_start + 1)))
                : 0;
            window = trial.middleRows(start, dict.kernels[l].length());
            double wnorm = window.norm();
            while (!(wnorm > 1e-12)) {
                for (Index i = 0; i < window.size(); ++i) window.data()[i] = rng.gaussian();
                wnorm = window.norm();
            }
            dict.kernels[l].waveform = window / wnorm;
            if (reinitialized) *reinitialized = true;
        }
    }
    return dict;
}

Index kernel_length_schedule(int iteration, int total, Index limit_length, Index extension) {
    if (iteration < 1 || iteration > total) throw RangeError("iteration outside [1, total]");
    // Border holds at T_m through pass floor(2I/3) and widens afterwards.
    return iteration <= (2 * total) / 3 ? limit_length : limit_length + extension;
}

ShiftKernel adapt_kernel_length(const ShiftKernel& kernel, Index bound,
                                double margin_fraction, double energy_threshold) {
    const Index t = kernel.length();
    const Index c = kernel.channels();
    const Index margin = std::max<Index>(1, static_cast<Index>(std::llround(
        margin_fraction * static_cast<double>(t))));
    const double kernel_rms = kernel.waveform.norm() /
                              std::sqrt(static_cast<double>(t * c));
    const double cutoff = energy_threshold * kernel_rms;

    auto edge_rms = [&](Index start) {
        return kernel.waveform.middleRows(start, margin).norm() /
               std::sqrt(static_cast<double>(margin * c));
    };
    const bool head_hot = edge_rms(0) > cutoff;
    const bool tail_hot = t > margin && edge_rms(t - margin) > cutoff;

    Matrix w = kernel.waveform;
    if (head_hot || tail_hot) {
        // Grow by one margin on each energetic side, within the border.
        Index grow_head = head_hot ? margin : 0;
        Index grow_tail = tail_hot ? margin : 0;
        Index overflow = t + grow_head + grow_tail - bound;
        if (overflow > 0) {
            const Index cut_tail = std::min(grow_tail, overflow);
            grow_tail -= cut_tail;
            overflow -= cut_tail;
            grow_head -= std::min(grow_head, overflow);
        }
        if (grow_head + grow_tail > 0) {
            Matrix grown = Matrix::Zero(t + grow_head + grow_tail, c);
            grown.middleRows(grow_head, t) = w;
            w = std::move(grown);
        }
    } else {
        // Both edges quiet: trim rows whose per-sample RMS sits below the
        // cutoff, keeping at least two samples.
        auto row_rms = [&](Index r) {
            return w.row(r).norm() / std::sqrt(static_cast<double>(c));
        };
        Index head = 0, tail = w.rows();
        while (tail - head > 2 && row_rms(head) <= cutoff) ++head;
        while (tail - head > 2 && row_rms(tail - 1) <= cutoff) --tail;
        if (head > 0 || tail < w.rows()) w = Matrix(w.middleRows(head, tail - head));
    }

    if (w.rows() > bound) w = Matrix(w.middleRows(0, bound));  // hard clamp
    const double norm = w.norm();
    if (norm > 0.0) w /= norm;
    return ShiftKernel{std::move(w)};
}

std::pair<KernelDictionary, TrainingTrace> mdla_train(const EpochSet& trials,
                                                      const LearnConfig& config) {
    if (trials.count() < 1) throw ConfigError("training set is empty");
    if (config.iterations < 1) throw ConfigError("iteration count must be at least 1");
    if (config.initial_length > config.limit_length)
        throw ConfigError("initial kernel length exceeds the limit length");

    Rng rng(config.rng_seed);
    KernelDictionary dict =
        config.initial_dictionary
            ? *config.initial_dictionary
            : init_dictionary(trials, config.kernel_count, config.initial_length, rng);
    if (dict.channels() != trials.channels())
        throw ShapeError("initial dictionary channel count mismatch");

    const std::size_t p_count = static_cast<std::size_t>(trials.count());
    TrainingTrace trace;

    PursuitConfig pursuit;
    pursuit.sparsity = config.sparsity;
    pursuit.variant = Variant::MOMP;
    pursuit.correlation = config.correlation;

    std::vector<std::size_t> order(p_count);
    std::iota(order.begin(), order.end(), 0);

    for (int pass = 1; pass <= config.iterations; ++pass) {
        rng.shuffle(order);
        const double eta = config.eta0 /
                           (1.0 + static_cast<double>(pass) / static_cast<double>(config.iterations));

        std::vector<Index> usage(dict.kernels.size(), 0);
        double residual_sum = 0.0;
        double worst_ratio = -1.0;
        std::size_t worst_trial = 0;

        for (std::size_t p : order) {
            const Matrix& trial = trials.epochs[p];
            const DecompositionResult res =
                momp_decompose(trial, dict, pursuit, config.shift_interval);

            residual_sum += res.residual_norm_history.back();
            const double trial_norm = trial.norm();
            const double ratio =
                trial_norm > 0.0 ? res.residual_norm_history.back() / trial_norm : 0.0;
            if (ratio > worst_ratio) {
                worst_ratio = ratio;
                worst_trial = p;
            }
            for (const auto& e : res.code.entries)
                ++usage[static_cast<std::size_t>(e.kernel)];

            if (config.skip_edge_updates && config.shift_interval) {
                // A best shift sitting on the search border means the true
                // optimum was likely outside; such trials corrupt the kernel.
                bool on_edge = false;
                for (const auto& e : res.code.entries) {
                    const Index t =
                        dict.kernels[static_cast<std::size_t>(e.kernel)].length();
                    const Index lo = std::max<Index>(
                        0, config.shift_interval->center - config.shift_interval->halfwidth);
                    const Index hi = std::min<Index>(
                        trial.rows() - t,
                        config.shift_interval->center + config.shift_interval->halfwidth);
                    if (hi > lo && (e.shift == lo || e.shift == hi)) on_edge = true;
                }
                if (on_edge) {
                    ++trace.skipped_edge_updates;
                    continue;
                }
            }

            bool reinit = false;
            dict = dictionary_update_step(std::move(dict), trial, res.code, eta, rng, &reinit);
            if (reinit) ++trace.reinitialized_kernels;
        }

        if (config.adapt_lengths) {
            // the border never exceeds the trial length: kernels must fit
            const Index bound = std::min(
                trials.length(), kernel_length_schedule(pass, config.iterations,
                                                        config.limit_length,
                                                        config.length_extension));
            for (auto& k : dict.kernels)
                k = adapt_kernel_length(k, bound, config.edge_margin_fraction,
                                        config.edge_energy_threshold);
        }

        // Dead kernels learn nothing; reseed them with the dominant
        // unexplained content: the residual energy peak of the worst trial.
        const auto reseed = [&](std::size_t l) {
            const Matrix& source = trials.epochs[worst_trial];
            const Index t = dict.kernels[l].length();
            const Matrix residual =
                source - synthesize(dict, momp_decompose(source, dict, pursuit,
                                                         config.shift_interval)
                                              .code,
                                    source.rows());
            const Index start = max_energy_window_start(residual, t);
            dict.kernels[l] = kernel_from_window(residual.middleRows(start, t), rng);
            ++trace.reinitialized_kernels;
        };
        for (std::size_t l = 0; l < dict.kernels.size(); ++l)
            if (usage[l] == 0) reseed(l);

        // Two kernels that became shifted copies of each other waste one
        // slot; reseed the less-used one so it can claim unexplained energy.
        if (config.coherence_threshold < 1.0) {
            for (std::size_t i = 0; i < dict.kernels.size(); ++i) {
                for (std::size_t j = i + 1; j < dict.kernels.size(); ++j) {
                    const double c = max_correlation(dict.kernels[i].waveform,
                                                     dict.kernels[j].waveform);
                    if (c <= config.coherence_threshold) continue;
                    reseed(usage[j] <= usage[i] ? j : i);
                }
            }
        }

        trace.mean_residual_norm.push_back(residual_sum / static_cast<double>(p_count));
        trace.kernel_usage.push_back(usage);
        std::vector<Index> lengths;
        for (const auto& k : dict.kernels) lengths.push_back(k.length());
        trace.kernel_lengths.push_back(std::move(lengths));
        if (config.record_snapshots) trace.snapshots.push_back(dict);
    }

    return {std::move(dict), std::move(trace)};
}

}  // namespace mvdict
