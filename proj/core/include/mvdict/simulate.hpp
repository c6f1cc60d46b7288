#pragma once

#include <mvdict/rng.hpp>
#include <mvdict/types.hpp>

#include <cstdint>
#include <utility>
#include <vector>

namespace mvdict {

/// Temporal FIR followed by a spatial mixing of white gaussian noise. The
/// default is a 5-tap binomial lowpass with exponentially decaying
/// cross-channel mixing, which keeps the noise spatially correlated.
struct FirNoiseModel {
    Vector taps;    // temporal FIR coefficients
    Matrix mixing;  // C x C spatial mixing

    static FirNoiseModel default_model(Index channels, double decay = 0.9);
    static FirNoiseModel white(Index channels);
};

struct SimulationSpec {
    Matrix reference;          // T x C pattern planted in every trial
    Index trials = 1;          // P
    Index epoch_length = 1;    // N
    double shift_mean = 0.0;   // epoch-relative center of the planted shifts
    double shift_std = 0.0;    // sigma, in samples
    double amplitude_mean = 1.0;
    double amplitude_std = 0.0;
    double snr_db = 0.0;       // +infinity = noiseless
    FirNoiseModel noise;
    std::uint64_t rng_seed = 0;
    double sample_rate = 240.0;
};

struct PlantedInstance {
    Index shift = 0;
    double amplitude = 0.0;
};

/// trial_p = amplitude_p * reference placed at shift_p + noise scaled to the
/// requested per-trial SNR. Deterministic given the seed; trials draw from
/// independent derived streams, so generation order does not matter.
std::pair<EpochSet, std::vector<PlantedInstance>> generate_trials(const SimulationSpec& spec);

/// White gaussian noise shaped by the FIR model. The empirical cross-channel
/// covariance approaches mixing * mixing^T scaled by the filter energy.
Matrix correlated_noise(Index n, Index channels, const FirNoiseModel& model, Rng& rng);

/// Scales `noise_part` so 10*log10(||signal||^2 / ||noise||^2) == snr_db.
Matrix scale_to_snr(const Matrix& signal_part, Matrix noise_part, double snr_db);

/// Deterministic smooth biphasic reference pattern used by the simulation
/// experiments when no measured pattern is supplied. Unit Frobenius norm.
Matrix reference_ep_pattern(Index length, Index channels);

}  // namespace mvdict
