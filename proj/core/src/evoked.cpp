#include <mvdict/evoked.hpp>

#include <algorithm>
#include <cmath>

namespace mvdict {

EpochSet epoch_record(const ContinuousRecord& record, Index epoch_length) {
    if (record.onsets.empty()) throw ConfigError("record carries no onsets");
    if (epoch_length < 1) throw ConfigError("epoch length must be positive");
    std::vector<Matrix> epochs;
    epochs.reserve(record.onsets.size());
    for (Index t : record.onsets) {
        if (t + epoch_length > record.length())
            throw RangeError("onset + epoch length overflows the record");
        epochs.push_back(record.samples.middleRows(t, epoch_length));
    }
    return make_epoch_set(std::move(epochs), record.sample_rate);
}

EvokedPattern grand_average(const EpochSet& epochs) {
    if (epochs.count() < 1) throw ConfigError("empty epoch set");
    Matrix mean = Matrix::Zero(epochs.length(), epochs.channels());
    for (const Matrix& e : epochs.epochs) mean += e;
    mean /= static_cast<double>(epochs.count());
    return EvokedPattern{std::move(mean), false};
}

EvokedPattern ls_estimate(const ContinuousRecord& record, Index epoch_length) {
    const Index n = epoch_length;
    const auto& onsets = record.onsets;
    if (onsets.empty()) throw ConfigError("record carries no onsets");
    for (Index t : onsets)
        if (t + n > record.length()) throw RangeError("onset + epoch length overflows the record");

    // (D^T D)(k, k') counts onset pairs with difference k - k'; with every
    // epoch fully inside the record this depends on the lag only.
    const Index p = static_cast<Index>(onsets.size());
    Vector lag_counts = Vector::Zero(n);  // lag 0 .. n-1
    lag_counts[0] = static_cast<double>(p);
    for (std::size_t i = 0; i < onsets.size(); ++i) {
        for (std::size_t j = i + 1; j < onsets.size(); ++j) {
            const Index lag = onsets[j] - onsets[i];
            if (lag >= n) break;  // onsets sorted
            lag_counts[lag] += 1.0;
        }
    }

    Matrix gram(n, n);
    for (Index k = 0; k < n; ++k)
        for (Index kp = 0; kp < n; ++kp) gram(k, kp) = lag_counts[std::abs(k - kp)];

    Matrix rhs = Matrix::Zero(n, record.channels());  // (D^T Y) row k
    for (Index t : onsets) rhs += record.samples.middleRows(t, n);

    Eigen::LDLT<Matrix> ldlt(gram);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw SolverError("stimulus Gram matrix is singular; " +
                          std::to_string(static_cast<long long>(
                              (lag_counts.array() > 0.0).count())) +
                          " of " + std::to_string(static_cast<long long>(n)) +
                          " lags are occupied");
    Matrix solution = ldlt.solve(rhs);
    const double residual_check = (gram * solution - rhs).norm();
    if (!(residual_check <= 1e-6 * (rhs.norm() + 1.0)))
        throw SolverError("stimulus Gram solve failed to converge");
    return EvokedPattern{std::move(solution), false};
}

EvokedPattern learn_ep_kernel(const EpochSet& epochs, const EvokedPattern& init, Index length,
                              double center_ms, Index halfwidth_points, int iterations,
                              double eta0, std::uint64_t rng_seed) {
    if (length > epochs.length()) throw ConfigError("kernel length exceeds the epoch length");

    const EvokedPattern warm = truncate_and_normalize(init, length);

    // center_ms is the kernel center relative to the stimulus; the shift
    // interval constrains the kernel start.
    const Index center_sample = static_cast<Index>(
        std::llround(center_ms / 1000.0 * epochs.sample_rate));
    ShiftInterval interval;
    interval.center = std::clamp<Index>(center_sample - length / 2, 0,
                                        epochs.length() - length);
    interval.halfwidth = halfwidth_points;

    LearnConfig config;
    config.kernel_count = 1;
    config.iterations = iterations;
    config.sparsity = 1;
    config.initial_length = length;
    config.limit_length = length;
    config.adapt_lengths = false;  // constant length during the learning
    config.shift_interval = interval;
    config.skip_edge_updates = true;
    config.eta0 = eta0;
    config.rng_seed = rng_seed;
    config.initial_dictionary = make_dictionary({make_kernel(warm.waveform)});

    auto [dict, trace] = mdla_train(epochs, config);
    return normalize_pattern(EvokedPattern{dict.kernels.front().waveform, true});
}

namespace {

Index rms_peak_row(const Matrix& w) {
    Index best = 0;
    double best_rms = -1.0;
    for (Index t = 0; t < w.rows(); ++t) {
        const double r = w.row(t).norm();
        if (r > best_rms) {
            best_rms = r;
            best = t;
        }
    }
    return best;
}

}  // namespace

Vector spatial_pattern(const EvokedPattern& pattern, PeakRule rule) {
    const Matrix& w = pattern.waveform;
    if (w.rows() < 1 || w.cols() < 1) throw ShapeError("empty pattern");
    Index peak = 0;
    if (rule == PeakRule::rms) {
        peak = rms_peak_row(w);
    } else {
        Index r = 0, c = 0;
        w.cwiseAbs().maxCoeff(&r, &c);
        peak = r;
    }
    return w.row(peak).transpose();
}

Matrix to_average_reference(const Matrix& samples) {
    if (samples.cols() < 2)
        throw ShapeError("average reference requires at least two channels");
    return samples.colwise() - samples.rowwise().mean();
}

MultivariateSignal to_average_reference(const MultivariateSignal& signal) {
    return MultivariateSignal{to_average_reference(signal.samples), signal.sample_rate};
}

EvokedPattern normalize_pattern(EvokedPattern pattern) {
    const double norm = pattern.waveform.norm();
    if (!(norm > 0.0)) throw ShapeError("cannot normalize an all-zero pattern");
    pattern.waveform /= norm;
    const Index peak = rms_peak_row(pattern.waveform);
    if (pattern.waveform.row(peak).mean() < 0.0) pattern.waveform = -pattern.waveform;
    pattern.normalized = true;
    return pattern;
}

EvokedPattern truncate_and_normalize(const EvokedPattern& pattern, Index length) {
    const Matrix& w = pattern.waveform;
    if (length > w.rows()) throw ConfigError("truncation length exceeds the pattern length");
    // Keep the window with maximal energy; ties go to the earliest start.
    Index best_start = 0;
    double best_energy = -1.0;
    double energy = w.topRows(length).squaredNorm();
    for (Index start = 0;; ++start) {
        if (energy > best_energy) {
            best_energy = energy;
            best_start = start;
        }
        if (start + length >= w.rows()) break;
        energy += w.row(start + length).squaredNorm() - w.row(start).squaredNorm();
    }
    return normalize_pattern(EvokedPattern{w.middleRows(best_start, length), false});
}

}  // namespace mvdict
