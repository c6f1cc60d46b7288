#include <mvdict/types.hpp>

#include <algorithm>
#include <set>

namespace mvdict {

MultivariateSignal make_signal(Matrix samples, double sample_rate) {
    if (samples.rows() < 1 || samples.cols() < 1)
        throw ShapeError("signal must have at least one sample and one channel");
    if (!samples.allFinite())
        throw ShapeError("signal contains non-finite entries");
    if (!(sample_rate > 0.0))
        throw ConfigError("sample rate must be positive");
    return MultivariateSignal{std::move(samples), sample_rate};
}

ShiftKernel normalized_kernel(Matrix waveform) {
    const double n = waveform.norm();
    if (!(n > 0.0) || !waveform.allFinite())
        throw ShapeError("kernel waveform must be nonzero and finite");
    waveform /= n;
    return ShiftKernel{std::move(waveform)};
}

ShiftKernel make_kernel(Matrix waveform) {
    if (waveform.rows() < 1 || waveform.cols() < 1)
        throw ShapeError("kernel must have at least one sample and one channel");
    const double n = waveform.norm();
    if (std::abs(n - 1.0) > 1e-10)
        throw ShapeError("kernel waveform must have unit Frobenius norm");
    return ShiftKernel{std::move(waveform)};
}

Index KernelDictionary::max_length() const {
    Index m = 0;
    for (const auto& k : kernels) m = std::max(m, k.length());
    return m;
}

KernelDictionary make_dictionary(std::vector<ShiftKernel> kernels) {
    if (kernels.empty()) throw ConfigError("dictionary must contain at least one kernel");
    const Index c = kernels.front().channels();
    for (const auto& k : kernels)
        if (k.channels() != c) throw ShapeError("all kernels must share one channel count");
    return KernelDictionary{std::move(kernels)};
}

bool SparseCode::has_duplicate_pairs() const {
    std::set<std::pair<Index, Index>> seen;
    for (const auto& e : entries)
        if (!seen.insert({e.kernel, e.shift}).second) return true;
    return false;
}

EpochSet make_epoch_set(std::vector<Matrix> epochs, double sample_rate) {
    if (epochs.empty()) throw ConfigError("epoch set must be nonempty");
    const Index n = epochs.front().rows();
    const Index c = epochs.front().cols();
    if (n < 1 || c < 1) throw ShapeError("epochs must be nonempty matrices");
    for (const auto& e : epochs)
        if (e.rows() != n || e.cols() != c) throw ShapeError("epochs must share one shape");
    return EpochSet{std::move(epochs), sample_rate};
}

ContinuousRecord make_record(Matrix samples, std::vector<Index> onsets, double sample_rate) {
    if (samples.rows() < 1 || samples.cols() < 1)
        throw ShapeError("record must have at least one sample and one channel");
    for (std::size_t i = 0; i + 1 < onsets.size(); ++i)
        if (onsets[i] >= onsets[i + 1]) throw RangeError("onsets must be strictly increasing");
    for (Index t : onsets)
        if (t < 0 || t >= samples.rows()) throw RangeError("onset outside the record");
    return ContinuousRecord{std::move(samples), std::move(onsets), sample_rate};
}

}  // namespace mvdict
