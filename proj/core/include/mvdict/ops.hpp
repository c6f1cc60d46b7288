#pragma once

#include <mvdict/types.hpp>

namespace mvdict {

struct CorrelationConfig {
    // Switch to frequency-domain correlation when the direct evaluation
    // would exceed this many multiply-adds per channel (roughly N * T).
    Index direct_threshold = 4096;
};

/// Places a kernel at `shift` inside an n-sample frame, zero elsewhere.
/// Frobenius norm is preserved. Throws RangeError if the kernel does not fit.
Matrix instantiate_atom(const ShiftKernel& kernel, Index shift, Index n);

/// Sum of coefficient * instantiate_atom(kernel, shift, n) over the code.
Matrix synthesize(const KernelDictionary& dict, const SparseCode& code, Index n);

/// Sum over channels of the per-channel scalar products, i.e. Tr(b^T a).
double multivariate_inner(const Matrix& a, const Matrix& b);

/// Correlation of the residual with the kernel at every admissible shift.
/// Entry tau equals multivariate_inner(residual, instantiate_atom(kernel, tau, N)).
/// Large problems go through an FFT; both paths agree within 1e-9 relative.
Vector correlate_all_shifts(const Matrix& residual, const Matrix& kernel,
                            const CorrelationConfig& config = {});

Vector correlate_all_shifts(const MultivariateSignal& residual, const ShiftKernel& kernel,
                            const CorrelationConfig& config = {});

}  // namespace mvdict
