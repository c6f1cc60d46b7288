#include <mvdict/simulate.hpp>

#include <mvdict/ops.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace mvdict {

FirNoiseModel FirNoiseModel::default_model(Index channels, double decay) {
    FirNoiseModel m;
    m.taps = Vector(5);
    m.taps << 1, 4, 6, 4, 1;
    m.taps /= 16.0;
    m.mixing = Matrix(channels, channels);
    for (Index i = 0; i < channels; ++i)
        for (Index j = 0; j < channels; ++j)
            m.mixing(i, j) = std::pow(decay, static_cast<double>(std::abs(i - j)));
    return m;
}

FirNoiseModel FirNoiseModel::white(Index channels) {
    FirNoiseModel m;
    m.taps = Vector::Constant(1, 1.0);
    m.mixing = Matrix::Identity(channels, channels);
    return m;
}

Matrix correlated_noise(Index n, Index channels, const FirNoiseModel& model, Rng& rng) {
    if (model.taps.size() < 1 || model.taps.cwiseAbs().maxCoeff() == 0.0)
        throw ConfigError("noise model needs at least one nonzero tap");
    if (model.mixing.rows() != channels || model.mixing.cols() != channels)
        throw ShapeError("noise mixing matrix must be C x C");

    Matrix white(n, channels);
    for (Index t = 0; t < n; ++t)
        for (Index c = 0; c < channels; ++c) white(t, c) = rng.gaussian();

    // Causal temporal FIR, zero initial state.
    const Index taps = model.taps.size();
    Matrix filtered = Matrix::Zero(n, channels);
    for (Index t = 0; t < n; ++t) {
        const Index reach = std::min<Index>(taps - 1, t);
        for (Index k = 0; k <= reach; ++k)
            filtered.row(t) += model.taps[k] * white.row(t - k);
    }
    return filtered * model.mixing.transpose();
}

Matrix scale_to_snr(const Matrix& signal_part, Matrix noise_part, double snr_db) {
    const double signal_norm = signal_part.norm();
    const double noise_norm = noise_part.norm();
    if (!(signal_norm > 0.0)) throw ConfigError("signal part has zero energy");
    if (!(noise_norm > 0.0)) throw ConfigError("noise part has zero energy");
    const double target_noise_norm = signal_norm * std::pow(10.0, -snr_db / 20.0);
    noise_part *= target_noise_norm / noise_norm;
    return noise_part;
}

std::pair<EpochSet, std::vector<PlantedInstance>> generate_trials(const SimulationSpec& spec) {
    const Index t = spec.reference.rows();
    const Index c = spec.reference.cols();
    const Index n = spec.epoch_length;
    if (t > n) throw ConfigError("reference pattern longer than the epoch");
    if (spec.trials < 1) throw ConfigError("trial count must be positive");
    const double ref_norm = spec.reference.norm();
    if (!(ref_norm > 0.0)) throw ConfigError("reference pattern has zero energy");

    // Amplitudes refer to the unit-norm pattern.
    const ShiftKernel pattern = normalized_kernel(spec.reference);
    const bool noiseless = std::isinf(spec.snr_db) && spec.snr_db > 0.0;

    std::vector<Matrix> epochs(static_cast<std::size_t>(spec.trials));
    std::vector<PlantedInstance> truth(static_cast<std::size_t>(spec.trials));
    for (Index p = 0; p < spec.trials; ++p) {
        Rng stream(Rng::derive(spec.rng_seed, static_cast<std::uint64_t>(p)));
        const double raw_shift = spec.shift_mean + spec.shift_std * stream.gaussian();
        const Index shift = std::clamp<Index>(static_cast<Index>(std::llround(raw_shift)),
                                              0, n - t);
        const double amplitude = spec.amplitude_mean + spec.amplitude_std * stream.gaussian();
        Matrix trial = amplitude * instantiate_atom(pattern, shift, n);
        if (!noiseless) {
            const Matrix noise = correlated_noise(n, c, spec.noise, stream);
            trial += scale_to_snr(trial, noise, spec.snr_db);
        }
        epochs[static_cast<std::size_t>(p)] = std::move(trial);
        truth[static_cast<std::size_t>(p)] = PlantedInstance{shift, amplitude};
    }
    return {make_epoch_set(std::move(epochs), spec.sample_rate), std::move(truth)};
}

Matrix reference_ep_pattern(Index length, Index channels) {
    // Sharp biphasic bump with smoothly varying channel weights; the shape
    // is fixed so experiments are reproducible without data files. The
    // temporal features are narrow relative to typical shift spreads, which
    // is what makes plain averaging smear them.
    Matrix w(length, channels);
    const double mid = 0.46 * static_cast<double>(length);
    const double dip = 0.68 * static_cast<double>(length);
    const double width_main = 0.05 * static_cast<double>(length);
    const double width_dip = 0.07 * static_cast<double>(length);
    for (Index c = 0; c < channels; ++c) {
        const double x = channels > 1
            ? static_cast<double>(c) / static_cast<double>(channels - 1)
            : 0.0;
        const double gain = 0.4 + 0.6 * std::cos(1.2 * x);
        const double dip_gain = 0.25 + 0.35 * x;
        for (Index i = 0; i < length; ++i) {
            const double z1 = (static_cast<double>(i) - mid) / width_main;
            const double z2 = (static_cast<double>(i) - dip) / width_dip;
            w(i, c) = gain * std::exp(-0.5 * z1 * z1) - dip_gain * std::exp(-0.5 * z2 * z2);
        }
    }
    return w / w.norm();
}

}  // namespace mvdict
