#pragma once

#include <mvdict/dla.hpp>
#include <mvdict/types.hpp>

namespace mvdict {

/// Cuts the record into one N-sample epoch per onset.
EpochSet epoch_record(const ContinuousRecord& record, Index epoch_length);

/// Elementwise mean across epochs (not normalized).
EvokedPattern grand_average(const EpochSet& epochs);

/// Least-squares evoked-potential estimate (D^T D)^{-1} D^T Y over the
/// stimulus Toeplitz matrix D; accounts for overlapping responses. Only the
/// N x N lag-count Gram and the onset-aligned correlation sums are formed.
EvokedPattern ls_estimate(const ContinuousRecord& record, Index epoch_length);

/// Single-kernel shift-constrained learning of an evoked pattern: wraps the
/// online dictionary learner with L = 1, K = 1, a fixed kernel length, the
/// shift search restricted to an interval around `center_ms`, and edge-shift
/// updates skipped. `init` provides the warm start (typically grand_average).
EvokedPattern learn_ep_kernel(const EpochSet& epochs, const EvokedPattern& init, Index length,
                              double center_ms, Index halfwidth_points, int iterations,
                              double eta0 = 0.1, std::uint64_t rng_seed = 0);

enum class PeakRule { rms, absmax };

/// Per-channel amplitudes at the pattern's temporal maximum; the maximum is
/// located by cross-channel RMS by default.
Vector spatial_pattern(const EvokedPattern& pattern, PeakRule rule = PeakRule::rms);

/// Subtracts the cross-channel mean from every sample row.
MultivariateSignal to_average_reference(const MultivariateSignal& signal);
Matrix to_average_reference(const Matrix& samples);

/// Utility used when comparing estimators: crops to the maximal-energy
/// `length`-sample window, then unit-normalizes with the sign chosen so the
/// peak row has a positive mean.
EvokedPattern truncate_and_normalize(const EvokedPattern& pattern, Index length);

/// Unit-normalizes in place with the positive-peak sign convention.
EvokedPattern normalize_pattern(EvokedPattern pattern);

}  // namespace mvdict
