#pragma once

#include <mvdict/pursuit.hpp>
#include <mvdict/rng.hpp>
#include <mvdict/types.hpp>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace mvdict {

struct LearnConfig {
    Index kernel_count = 1;         // L
    int iterations = 1;             // I, full passes over the training set
    Index sparsity = 1;             // K per trial
    Index initial_length = 1;       // T_i
    Index limit_length = 1;         // T_m
    Index length_extension = 40;    // border becomes T_m + extension late in training
    double eta0 = 0.1;              // step size; eta_i = eta0 / (1 + i / I)
    std::optional<ShiftInterval> shift_interval;
    bool skip_edge_updates = false; // drop updates whose best shift sits on an interval edge
    bool adapt_lengths = true;      // grow/shrink kernels from edge energy
    double edge_margin_fraction = 0.10;   // margin = fraction of kernel length
    double edge_energy_threshold = 0.05;  // edge RMS vs kernel RMS
    // Two kernels whose best shifted correlation exceeds this are duplicates;
    // the less-used one is reseeded (1.0 disables the check).
    double coherence_threshold = 0.95;
    std::uint64_t rng_seed = 0;
    std::optional<KernelDictionary> initial_dictionary;  // warm start
    bool record_snapshots = false;
    CorrelationConfig correlation;
};

struct TrainingTrace {
    std::vector<double> mean_residual_norm;          // one entry per pass
    std::vector<std::vector<Index>> kernel_usage;    // per pass, per kernel
    std::vector<std::vector<Index>> kernel_lengths;  // per pass, per kernel
    std::vector<KernelDictionary> snapshots;         // per pass, when recorded
    Index reinitialized_kernels = 0;                 // collapse + dead-atom reseeds
    Index skipped_edge_updates = 0;
};

/// L kernels initialized from random T_i-length windows of random trials,
/// unit-normalized. Deterministic for a given rng state.
KernelDictionary init_dictionary(const EpochSet& trials, Index kernel_count,
                                 Index initial_length, Rng& rng);

/// One stochastic gradient step of the dictionary on one coded trial:
/// every kernel used by the code moves along its residual windows, then is
/// renormalized. A kernel that collapses to zero energy is reseeded from a
/// random window of the trial (`reinitialized` reports it).
KernelDictionary dictionary_update_step(KernelDictionary dict, const Matrix& trial,
                                        const SparseCode& code, double eta, Rng& rng,
                                        bool* reinitialized = nullptr);

/// Kernel-length border: T_m for the first two thirds of the passes,
/// T_m + extension afterwards.
Index kernel_length_schedule(int iteration, int total, Index limit_length, Index extension);

/// Grows a kernel (zero-padding, up to `bound`) when either edge carries
/// energy, trims near-silent edges otherwise; renormalizes.
ShiftKernel adapt_kernel_length(const ShiftKernel& kernel, Index bound,
                                double margin_fraction, double energy_threshold);

/// Online multivariate dictionary learning: per trial, an M-OMP sparse
/// approximation followed by a stochastic gradient dictionary update, with
/// the kernel-length border applied at the end of each pass.
std::pair<KernelDictionary, TrainingTrace> mdla_train(const EpochSet& trials,
                                                      const LearnConfig& config);

}  // namespace mvdict
