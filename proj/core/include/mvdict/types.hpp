#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace mvdict {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// ---------------------------------------------------------------------------
// Errors. One type per contract violation so callers can map them to exit
// codes and tests can assert on the failure class.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

class LengthError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Data model. Matrices are time-major: row = sample, column = channel.
// ---------------------------------------------------------------------------

/// A multichannel time series of N samples by C channels.
struct MultivariateSignal {
    Matrix samples;            // N x C
    double sample_rate = 1.0;  // samples per second

    Index length() const { return samples.rows(); }
    Index channels() const { return samples.cols(); }
    double norm() const { return samples.norm(); }
};

/// Validates N >= 1, C >= 1, finite entries, positive rate.
MultivariateSignal make_signal(Matrix samples, double sample_rate = 1.0);

/// A short multivariate waveform, unit Frobenius norm, shiftable in time.
struct ShiftKernel {
    Matrix waveform;  // T x C

    Index length() const { return waveform.rows(); }
    Index channels() const { return waveform.cols(); }
};

/// Builds a kernel from an arbitrary nonzero waveform, normalizing it.
ShiftKernel normalized_kernel(Matrix waveform);

/// Validates the unit-norm invariant (|norm - 1| <= 1e-10).
ShiftKernel make_kernel(Matrix waveform);

/// An ordered set of shiftable kernels sharing one channel count.
struct KernelDictionary {
    std::vector<ShiftKernel> kernels;

    Index size() const { return static_cast<Index>(kernels.size()); }
    Index channels() const { return kernels.empty() ? 0 : kernels.front().channels(); }
    Index max_length() const;
};

/// Validates L >= 1 and consistent channel counts.
KernelDictionary make_dictionary(std::vector<ShiftKernel> kernels);

/// One selected kernel instance: which kernel, where, and its weight.
struct SparseEntry {
    Index kernel = 0;       // index into KernelDictionary, 0-based
    Index shift = 0;        // tau, in [0, N - T_l]
    double coefficient = 0.0;
};

/// A shift-invariant sparse code: K (kernel, shift, coefficient) triples.
struct SparseCode {
    std::vector<SparseEntry> entries;

    Index size() const { return static_cast<Index>(entries.size()); }
    bool has_duplicate_pairs() const;
};

/// One multichannel selection: a monochannel atom with per-channel
/// amplitudes, and per-channel phases for the complex-atom variants.
struct MultichannelEntry {
    Index atom = 0;
    Vector amplitudes;  // length C
    Vector phases;      // length C, in (-pi, pi]; all-zero for real atoms
};

struct MultichannelCode {
    std::vector<MultichannelEntry> entries;

    Index size() const { return static_cast<Index>(entries.size()); }
};

/// P equally shaped trials cut from a continuous record.
struct EpochSet {
    std::vector<Matrix> epochs;  // each N x C
    double sample_rate = 1.0;

    Index count() const { return static_cast<Index>(epochs.size()); }
    Index length() const { return epochs.empty() ? 0 : epochs.front().rows(); }
    Index channels() const { return epochs.empty() ? 0 : epochs.front().cols(); }
};

/// Validates non-empty, consistent shapes.
EpochSet make_epoch_set(std::vector<Matrix> epochs, double sample_rate = 1.0);

/// A full acquisition with the stimulus onsets marked in it.
struct ContinuousRecord {
    Matrix samples;              // script-N x C
    std::vector<Index> onsets;   // strictly increasing sample indices
    double sample_rate = 1.0;

    Index length() const { return samples.rows(); }
    Index channels() const { return samples.cols(); }
};

/// Validates onset ordering; each onset + epoch_length must fit when epoching.
ContinuousRecord make_record(Matrix samples, std::vector<Index> onsets, double sample_rate = 1.0);

/// An estimated evoked-potential waveform (N x C or T x C).
struct EvokedPattern {
    Matrix waveform;
    bool normalized = false;

    Index length() const { return waveform.rows(); }
    Index channels() const { return waveform.cols(); }
};

}  // namespace mvdict
