#include <mvdict/filter.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mvdict {

namespace {

constexpr double kPi = std::numbers::pi;
using Complex = std::complex<double>;

}  // namespace

std::complex<double> SosFilter::response(double hz) const {
    const Complex z = std::polar(1.0, 2.0 * kPi * hz / sample_rate);
    const Complex zi = 1.0 / z;
    Complex h = gain;
    for (const Biquad& s : sections)
        h *= (s.b0 + s.b1 * zi + s.b2 * zi * zi) / (1.0 + s.a1 * zi + s.a2 * zi * zi);
    return h;
}

Vector SosFilter::apply(const Vector& x) const {
    Vector y = gain * x;
    for (const Biquad& s : sections) {
        // Direct form II transposed.
        double w1 = 0.0, w2 = 0.0;
        for (Index t = 0; t < y.size(); ++t) {
            const double in = y[t];
            const double out = s.b0 * in + w1;
            w1 = s.b1 * in - s.a1 * out + w2;
            w2 = s.b2 * in - s.a2 * out;
            y[t] = out;
        }
    }
    return y;
}

Vector SosFilter::apply_zero_phase(const Vector& x) const {
    Vector y = apply(x);
    y.reverseInPlace();
    y = apply(y);
    y.reverseInPlace();
    return y;
}

SosFilter design_butterworth_bandpass(const FilterSpec& spec, double sample_rate) {
    if (!(sample_rate > 0.0)) throw ConfigError("sample rate must be positive");
    if (!(spec.low_hz > 0.0) || !(spec.low_hz < spec.high_hz) ||
        !(spec.high_hz < sample_rate / 2.0))
        throw ConfigError("bandpass requires 0 < low < high < rate/2");
    if (spec.order < 1) throw ConfigError("filter order must be at least 1");

    // Prewarped analog edges for the bilinear transform s = (1 - z^-1)/(1 + z^-1).
    const double w1 = std::tan(kPi * spec.low_hz / sample_rate);
    const double w2 = std::tan(kPi * spec.high_hz / sample_rate);
    const double bw = w2 - w1;
    const double w0_sq = w1 * w2;

    // Lowpass prototype poles on the unit Butterworth circle (left half
    // plane), then the bandpass transform s -> (s^2 + w0^2) / (bw * s):
    // each prototype pole p yields the two roots of s^2 - bw*p*s + w0^2.
    const int n = spec.order;
    std::vector<Complex> poles;
    poles.reserve(2 * static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        const double theta = kPi * (2.0 * k + n - 1.0) / (2.0 * n);
        const Complex p(std::cos(theta), std::sin(theta));
        const Complex half = 0.5 * bw * p;
        const Complex root = std::sqrt(half * half - w0_sq);
        poles.push_back(half + root);
        poles.push_back(half - root);
    }

    // Bilinear map into z, then pair poles into conjugate pairs.
    std::vector<Complex> zpoles;
    zpoles.reserve(poles.size());
    for (const Complex& s : poles) zpoles.push_back((1.0 + s) / (1.0 - s));

    std::vector<Complex> upper, reals;
    for (const Complex& z : zpoles) {
        if (std::abs(z.imag()) < 1e-12)
            reals.push_back(z);
        else if (z.imag() > 0.0)
            upper.push_back(z);
    }
    std::sort(upper.begin(), upper.end(),
              [](const Complex& a, const Complex& b) { return a.real() < b.real(); });
    std::sort(reals.begin(), reals.end(),
              [](const Complex& a, const Complex& b) { return a.real() < b.real(); });

    SosFilter filter;
    filter.sample_rate = sample_rate;
    // The 2n zeros sit at z = +1 (n of them) and z = -1 (n); each section
    // takes one of each: numerator (1 - z^-2).
    for (const Complex& z : upper) {
        Biquad s;
        s.b0 = 1.0;
        s.b1 = 0.0;
        s.b2 = -1.0;
        s.a1 = -2.0 * z.real();
        s.a2 = std::norm(z);
        filter.sections.push_back(s);
    }
    for (std::size_t i = 0; i + 1 < reals.size(); i += 2) {
        Biquad s;
        s.b0 = 1.0;
        s.b1 = 0.0;
        s.b2 = -1.0;
        s.a1 = -(reals[i].real() + reals[i + 1].real());
        s.a2 = reals[i].real() * reals[i + 1].real();
        filter.sections.push_back(s);
    }
    if (filter.sections.size() != static_cast<std::size_t>(n))
        throw SolverError("butterworth pole pairing failed");

    // Unit gain at the geometric band center.
    const double fc = std::sqrt(spec.low_hz * spec.high_hz);
    const double mag = std::abs(filter.response(fc));
    if (!(mag > 0.0)) throw SolverError("butterworth design produced a null passband");
    filter.gain = 1.0 / mag;
    return filter;
}

MultivariateSignal butterworth_bandpass(const MultivariateSignal& signal, const FilterSpec& spec,
                                        bool zero_phase) {
    const SosFilter filter = design_butterworth_bandpass(spec, signal.sample_rate);
    Matrix out(signal.length(), signal.channels());
    for (Index c = 0; c < signal.channels(); ++c)
        out.col(c) = zero_phase ? filter.apply_zero_phase(signal.samples.col(c))
                                : filter.apply(signal.samples.col(c));
    return MultivariateSignal{std::move(out), signal.sample_rate};
}

MultivariateSignal zero_pad(const MultivariateSignal& signal, Index front, Index back) {
    if (front < 0 || back < 0) throw ConfigError("padding must be nonnegative");
    Matrix out = Matrix::Zero(signal.length() + front + back, signal.channels());
    out.middleRows(front, signal.length()) = signal.samples;
    return MultivariateSignal{std::move(out), signal.sample_rate};
}

}  // namespace mvdict
