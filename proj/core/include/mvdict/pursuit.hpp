#pragma once

#include <mvdict/ops.hpp>
#include <mvdict/types.hpp>

#include <optional>
#include <string>
#include <vector>

namespace mvdict {

enum class Variant { MP, OMP, MMP1, MMP2, MMP3, MMP4, MOMP };

Variant variant_from_string(const std::string& name);
std::string to_string(Variant v);

/// Restricts the shift search of M-OMP to [center - halfwidth, center + halfwidth]
/// (intersected with the valid range for each kernel length).
struct ShiftInterval {
    Index center = 0;
    Index halfwidth = 0;
};

struct PursuitConfig {
    Index sparsity = 1;               // K
    Variant variant = Variant::MOMP;
    double residual_tolerance = 0.0;  // early stop at ||eps|| < tol * ||y||; 0 = off
    CorrelationConfig correlation;
};

struct DecompositionResult {
    SparseCode code;                 // filled by MOMP
    MultichannelCode channel_code;   // filled by the atom-table variants
    Matrix residual;
    std::vector<double> residual_norm_history;  // K + 1 entries
    bool gram_regularized = false;   // set when the OMP Gram needed a ridge
};

/// argmax_m |<residual, atom_m>| over a monochannel atom table;
/// ties break to the lowest index.
Index mp_select_mono(const Vector& residual, const Matrix& atoms);

struct MmpSelection {
    Index atom = 0;
    Vector amplitudes;  // per channel
    Vector phases;      // per channel; zero for the real-atom variants
};

/// Multichannel selection rules over real atoms (MMP1: summed energy,
/// MMP2: average correlation) or analytic atoms (MMP3/MMP4, with a free
/// phase per channel).
MmpSelection mmp_select(const Matrix& residual, const Matrix& atoms, Variant variant);
MmpSelection mmp_select(const Matrix& residual, const ComplexMatrix& atoms, Variant variant);

/// Greedy loop over a real atom table. MP/OMP require a single channel;
/// MMP1/MMP2 accept any channel count. MP and the MMP variants subtract
/// plain per-channel projections; OMP re-projects on the active set.
DecompositionResult decompose(const Matrix& signal, const Matrix& atoms,
                              const PursuitConfig& config);

/// Greedy loop over an analytic atom table (MMP3/MMP4).
DecompositionResult decompose(const Matrix& signal, const ComplexMatrix& atoms,
                              const PursuitConfig& config);

/// Shift-invariant multivariate OMP over a kernel dictionary: selects the
/// (kernel, shift) pair with the maximal multivariate correlation, then
/// recomputes all active coefficients by least squares.
DecompositionResult momp_decompose(const Matrix& signal, const KernelDictionary& dict,
                                   const PursuitConfig& config,
                                   std::optional<ShiftInterval> interval = std::nullopt);

DecompositionResult momp_decompose(const MultivariateSignal& signal,
                                   const KernelDictionary& dict, const PursuitConfig& config,
                                   std::optional<ShiftInterval> interval = std::nullopt);

/// Least-squares coefficients of `signal` on the given multivariate atoms:
/// minimizes ||signal - sum x_i a_i||_F. Near-singular Gram matrices get a
/// 1e-10 ridge; `regularized` reports it when non-null.
Vector orthogonal_project(const Matrix& signal, const std::vector<Matrix>& active_atoms,
                          bool* regularized = nullptr);

}  // namespace mvdict
