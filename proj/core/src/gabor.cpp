#include <mvdict/gabor.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace mvdict {

namespace {

constexpr double kPi = std::numbers::pi;

void check_params(const GaborParams& p, Index n) {
    if (!(p.scale > 0.0)) throw ConfigError("gabor scale must be positive");
    const double u = p.center();
    if (u < 0.0 || u >= static_cast<double>(n))
        throw RangeError("gabor atom center outside the signal frame");
}

}  // namespace

Vector gabor_atom(const GaborParams& p, Index n) {
    check_params(p, n);
    const double u = p.center();
    const double inv_sqrt_s = 1.0 / std::sqrt(p.scale);
    Vector atom(n);
    for (Index t = 0; t < n; ++t) {
        const double z = (static_cast<double>(t) - u) / p.scale;
        atom[t] = inv_sqrt_s * std::exp(-kPi * z * z) *
                  std::cos(2.0 * kPi * p.frequency * static_cast<double>(t) + p.phase);
    }
    const double norm = atom.norm();
    if (!(norm > 0.0)) throw ConfigError("gabor atom vanished; check scale/frequency/phase");
    return atom / norm;
}

ComplexVector complex_gabor_atom(const GaborParams& p, Index n) {
    check_params(p, n);
    const double u = p.center();
    const double inv_sqrt_s = 1.0 / std::sqrt(p.scale);
    ComplexVector atom(n);
    for (Index t = 0; t < n; ++t) {
        const double z = (static_cast<double>(t) - u) / p.scale;
        const double w = inv_sqrt_s * std::exp(-kPi * z * z);
        const double arg = 2.0 * kPi * p.frequency * static_cast<double>(t);
        atom[t] = std::complex<double>(w * std::cos(arg), w * std::sin(arg));
    }
    const double norm = atom.norm();
    if (!(norm > 0.0)) throw ConfigError("gabor atom vanished; check scale/frequency/phase");
    return atom / norm;
}

Index GaborGrid::shifts_at(std::size_t scale_index) const {
    const double step = alphas[scale_index] * scales[scale_index];
    if (!(step > 0.0)) throw ConfigError("gabor shift step must be positive");
    return static_cast<Index>(std::ceil(static_cast<double>(signal_length) / step));
}

std::size_t GaborGrid::atom_count() const {
    std::size_t m = 0;
    for (std::size_t i = 0; i < scales.size(); ++i)
        m += static_cast<std::size_t>(shifts_at(i)) *
             static_cast<std::size_t>(frequency_counts[i]) * phases.size();
    return m;
}

GaborGrid default_gabor_grid(Index n, std::size_t target_m) {
    GaborGrid grid;
    grid.signal_length = n;
    for (double s = 4.0; s <= 256.0 && s <= static_cast<double>(n); s *= 2.0) {
        grid.scales.push_back(s);
        grid.alphas.push_back(1.0);
        grid.frequency_counts.push_back(1);
    }
    if (grid.scales.empty()) throw ConfigError("signal too short for the default gabor grid");
    grid.phases = {0.0, kPi / 2.0};
    return gabor_grid_for_target(std::move(grid), target_m);
}

GaborGrid gabor_grid_for_target(GaborGrid grid, std::size_t target_m) {
    if (grid.scales.empty() || grid.phases.empty())
        throw ConfigError("gabor grid must have at least one scale and one phase");
    if (grid.frequency_counts.size() != grid.scales.size() ||
        grid.alphas.size() != grid.scales.size())
        throw ConfigError("gabor grid per-scale lists must have equal lengths");

    const std::size_t n_scales = grid.scales.size();
    const std::size_t p = grid.phases.size();
    std::vector<std::size_t> block(n_scales);  // atoms added per extra frequency
    std::size_t min_total = 0;
    for (std::size_t i = 0; i < n_scales; ++i) {
        block[i] = static_cast<std::size_t>(grid.shifts_at(i)) * p;
        min_total += block[i];
    }
    if (target_m < min_total)
        throw ConfigError("gabor target atom count below one frequency per scale");

    // Proportional start, then greedy one-frequency moves until exact.
    const std::size_t base = target_m / min_total;
    for (std::size_t i = 0; i < n_scales; ++i)
        grid.frequency_counts[i] = static_cast<int>(base > 0 ? base : 1);

    auto deficit = [&] {
        return static_cast<long long>(target_m) - static_cast<long long>(grid.atom_count());
    };
    long long d = deficit();
    for (int guard = 0; d != 0 && guard < 100000; ++guard) {
        long long best_abs = std::llabs(d);
        std::size_t best_i = n_scales;
        int best_sign = 0;
        for (std::size_t i = 0; i < n_scales; ++i) {
            for (int sign : {+1, -1}) {
                if (sign < 0 && grid.frequency_counts[i] <= 1) continue;
                const long long after = d - sign * static_cast<long long>(block[i]);
                if (std::llabs(after) < best_abs) {
                    best_abs = std::llabs(after);
                    best_i = i;
                    best_sign = sign;
                }
            }
        }
        if (best_i == n_scales)
            throw ConfigError("gabor grid cannot reach the requested atom count exactly");
        grid.frequency_counts[best_i] += best_sign;
        d = deficit();
    }
    if (d != 0) throw ConfigError("gabor grid target adjustment did not converge");
    return grid;
}

namespace {

template <typename Dict, typename BuildAtom>
Dict build_table(const GaborGrid& grid, bool enumerate_phases, BuildAtom&& build) {
    const Index n = grid.signal_length;
    if (n < 1) throw ConfigError("gabor grid signal length unset");
    std::vector<double> phases = enumerate_phases ? grid.phases : std::vector<double>{0.0};
    if (grid.scales.empty() || phases.empty()) throw ConfigError("empty gabor grid");

    std::size_t m = 0;
    for (std::size_t i = 0; i < grid.scales.size(); ++i)
        m += static_cast<std::size_t>(grid.shifts_at(i)) *
             static_cast<std::size_t>(grid.frequency_counts[i]) * phases.size();

    Dict dict;
    dict.atoms.resize(n, static_cast<Index>(m));
    dict.params.reserve(m);
    Index col = 0;
    for (std::size_t i = 0; i < grid.scales.size(); ++i) {
        const Index shifts = grid.shifts_at(i);
        const int freqs = grid.frequency_counts[i];
        for (Index j = 0; j < shifts; ++j) {
            for (int k = 0; k < freqs; ++k) {
                const double f = 0.5 * static_cast<double>(k + 1) / static_cast<double>(freqs);
                for (double phase : phases) {
                    GaborParams p;
                    p.scale = grid.scales[i];
                    p.shift_index = j;
                    p.shift_factor = grid.alphas[i];
                    p.frequency = f;
                    p.phase = phase;
                    dict.atoms.col(col) = build(p, n);
                    dict.params.push_back(p);
                    ++col;
                }
            }
        }
    }
    return dict;
}

}  // namespace

GaborDictionary build_gabor_dictionary(const GaborGrid& grid) {
    return build_table<GaborDictionary>(grid, true, [](const GaborParams& p, Index n) {
        return gabor_atom(p, n);
    });
}

ComplexGaborDictionary build_complex_gabor_dictionary(const GaborGrid& grid) {
    return build_table<ComplexGaborDictionary>(grid, false, [](const GaborParams& p, Index n) {
        return complex_gabor_atom(p, n);
    });
}

}  // namespace mvdict
