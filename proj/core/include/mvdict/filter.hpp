#pragma once

#include <mvdict/types.hpp>

#include <complex>
#include <vector>

namespace mvdict {

/// Butterworth bandpass parameters. `order` is the analog prototype order;
/// the digital filter has 2*order poles realized as `order` biquads.
struct FilterSpec {
    double low_hz = 1.0;
    double high_hz = 20.0;
    int order = 3;
};

struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;  // numerator
    double a1 = 0.0, a2 = 0.0;            // denominator (a0 = 1)
};

/// Cascaded second-order sections with a scalar gain, normalized to unit
/// magnitude at the geometric band center.
struct SosFilter {
    std::vector<Biquad> sections;
    double gain = 1.0;
    double sample_rate = 0.0;

    /// Complex frequency response at `hz`.
    std::complex<double> response(double hz) const;

    /// Causal (forward) application, zero initial state.
    Vector apply(const Vector& x) const;

    /// Forward-backward (zero phase) application; magnitude is squared.
    Vector apply_zero_phase(const Vector& x) const;
};

/// Bilinear-transform design of the bandpass. Throws ConfigError unless
/// 0 < low < high < rate/2 and order >= 1.
SosFilter design_butterworth_bandpass(const FilterSpec& spec, double sample_rate);

/// Per-channel IIR bandpass of a signal; causal by default.
MultivariateSignal butterworth_bandpass(const MultivariateSignal& signal, const FilterSpec& spec,
                                        bool zero_phase = false);

/// Appends `back` zero rows and prepends `front` zero rows. Norm unchanged.
MultivariateSignal zero_pad(const MultivariateSignal& signal, Index front, Index back);

}  // namespace mvdict
