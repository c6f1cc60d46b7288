#pragma once

#include <mvdict/types.hpp>

#include <cstddef>
#include <vector>

namespace mvdict {

/// Parameters of one Gabor atom:
///   phi(t) = (1/sqrt(s)) * g((t - u)/s) * cos(2*pi*f*t + phase),
/// with g(t) = exp(-pi t^2) a Gaussian window and u = alpha * shift_index * s
/// the atom center. The discrete atom is normalized after sampling, so the
/// normalization factor never appears here.
struct GaborParams {
    double scale = 1.0;        // s, in samples
    Index shift_index = 0;     // tau
    double shift_factor = 1.0; // alpha
    double frequency = 0.0;    // f, cycles/sample, in [0, 0.5]
    double phase = 0.0;        // radians (real atoms only)

    double center() const { return shift_factor * static_cast<double>(shift_index) * scale; }
};

/// Sampled, l2-normalized real Gabor atom of length n.
Vector gabor_atom(const GaborParams& p, Index n);

/// Analytic atom (1/sqrt(s)) * g((t-u)/s) * exp(i 2 pi f t), unit-normalized.
/// Its per-channel projection phase supplies the phases of the complex MMPs.
ComplexVector complex_gabor_atom(const GaborParams& p, Index n);

/// Enumeration grid: per-scale shift factors and frequency counts, plus the
/// phase set used by real-atom dictionaries. Atom order is scale-major,
/// then shift, then frequency, then phase.
struct GaborGrid {
    Index signal_length = 0;
    std::vector<double> scales;        // dyadic by default
    std::vector<double> alphas;        // shift factor per scale
    std::vector<int> frequency_counts; // frequencies per scale, uniform in (0, 0.5]
    std::vector<double> phases;        // {0} minimum; {0, pi/2} default

    Index shifts_at(std::size_t scale_index) const;
    std::size_t atom_count() const;
};

/// Dyadic default grid: scales {4, 8, ..., 256} clipped to <= n, alpha = 1,
/// phases {0, pi/2}, frequency counts adjusted to hit `target_m` atoms
/// exactly (30720 by default, the usual size at n = 501).
GaborGrid default_gabor_grid(Index n, std::size_t target_m = 30720);

/// Adjusts per-scale frequency counts of `grid` until atom_count() == target_m.
/// Throws ConfigError when the target is unreachable.
GaborGrid gabor_grid_for_target(GaborGrid grid, std::size_t target_m);

/// A monochannel atom table plus the index -> params bijection.
struct GaborDictionary {
    Matrix atoms;  // n x M, unit-norm columns
    std::vector<GaborParams> params;

    Index atom_count() const { return atoms.cols(); }
};

/// Analytic-atom table for the complex MMP variants. The phase set is not
/// enumerated: phases are free parameters recovered at selection time.
struct ComplexGaborDictionary {
    ComplexMatrix atoms;  // n x M, unit-norm columns
    std::vector<GaborParams> params;

    Index atom_count() const { return atoms.cols(); }
};

GaborDictionary build_gabor_dictionary(const GaborGrid& grid);
ComplexGaborDictionary build_complex_gabor_dictionary(const GaborGrid& grid);

}  // namespace mvdict
