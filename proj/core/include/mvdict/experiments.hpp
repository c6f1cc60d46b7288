#pragma once

#include <mvdict/dla.hpp>
#include <mvdict/metrics.hpp>
#include <mvdict/simulate.hpp>
#include <mvdict/types.hpp>

#include <cstdint>
#include <vector>

namespace mvdict {

/// Shift-robustness sweep: for each shift standard deviation, plant a fixed
/// reference pattern into correlated noise, estimate it by grand average and
/// by single-kernel learning (warm-started from the grand average), and
/// report the mean max-correlation of each estimator with the reference.
struct SweepConfig {
    std::vector<double> sigmas = {0, 2, 4, 6, 8};
    int repetitions = 10;
    Index trials = 200;          // P per repetition
    double snr_db = -10.0;
    Index channels = 8;
    Index pattern_length = 65;   // T
    Index epoch_length = 192;    // N
    int iterations = 20;         // learning passes
    double eta0 = 0.02;          // calibrated for -10 dB online updates
    // Moderate coloration: strong coloring biases the maximum-likelihood
    // kernel update toward the top noise modes and sinks the aligned case.
    double noise_spatial_decay = 0.5;
    std::vector<double> noise_taps = {0.25, 0.5, 0.25};
    std::uint64_t seed = 0;
    double sample_rate = 240.0;
};

struct SweepRow {
    double sigma = 0.0;
    double mean_ga = 0.0;
    double mean_mdla = 0.0;
};

std::vector<SweepRow> shift_robustness_sweep(const SweepConfig& config);

/// One (sigma, repetition) cell of the sweep; exposed for tests.
struct SweepCell {
    double ga = 0.0;
    double mdla = 0.0;
};
SweepCell shift_robustness_cell(const SweepConfig& config, double sigma, int repetition);

/// Planted-dictionary protocol: draw L smooth random kernels, build trials
/// as K instances each plus noise, learn a dictionary back with M-DLA and
/// score it against the plants under the best one-to-one assignment.
struct PlantedConfig {
    Index kernel_count = 5;      // L
    Index kernel_length = 32;    // T
    Index channels = 4;
    Index trials = 300;
    Index epoch_length = 128;
    Index sparsity = 3;          // K, instances per trial and per decomposition
    double snr_db = 10.0;
    int iterations = 30;
    double eta0 = 0.1;
    std::uint64_t seed = 0;
};

struct PlantedResult {
    KernelDictionary planted;
    KernelDictionary learned;
    EpochSet trials;
    double mean_assignment_correlation = 0.0;  // best one-to-one matching
};

PlantedResult planted_recovery(const PlantedConfig& config);

/// Mean max-correlation between two equally sized kernel sets under the
/// best one-to-one assignment (exhaustive; L is small).
double dictionary_assignment_correlation(const KernelDictionary& learned,
                                         const KernelDictionary& reference);

/// Smooth random unit-norm kernels for the planted protocols.
KernelDictionary random_smooth_dictionary(Index kernel_count, Index length, Index channels,
                                          Rng& rng);

}  // namespace mvdict
