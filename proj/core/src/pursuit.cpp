#include <mvdict/pursuit.hpp>

#include <mvdict/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace mvdict {

Variant variant_from_string(const std::string& name) {
    std::string s;
    for (char c : name) s.push_back(static_cast<char>(std::tolower(c)));
    if (s == "mp") return Variant::MP;
    if (s == "omp") return Variant::OMP;
    if (s == "mmp1") return Variant::MMP1;
    if (s == "mmp2") return Variant::MMP2;
    if (s == "mmp3") return Variant::MMP3;
    if (s == "mmp4") return Variant::MMP4;
    if (s == "momp") return Variant::MOMP;
    throw ConfigError("unknown pursuit variant: " + name);
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::MP: return "mp";
        case Variant::OMP: return "omp";
        case Variant::MMP1: return "mmp1";
        case Variant::MMP2: return "mmp2";
        case Variant::MMP3: return "mmp3";
        case Variant::MMP4: return "mmp4";
        case Variant::MOMP: return "momp";
    }
    return "?";
}

namespace {

double wrap_phase(double phi) {
    // std::arg yields [-pi, pi]; the contract wants (-pi, pi].
    return phi == -std::numbers::pi ? std::numbers::pi : phi;
}

void check_sparsity(Index k, Index m) {
    if (k < 1) throw ConfigError("sparsity K must be at least 1");
    if (k > m) throw ConfigError("sparsity K exceeds the number of atoms");
}

}  // namespace

Index mp_select_mono(const Vector& residual, const Matrix& atoms) {
    if (atoms.cols() < 1) throw ConfigError("empty dictionary");
    if (atoms.rows() != residual.size()) throw ShapeError("atom length mismatch");
    Index best = 0;
    double best_score = -1.0;
    for (Index m = 0; m < atoms.cols(); ++m) {
        const double score = std::abs(atoms.col(m).dot(residual));
        if (score > best_score) {
            best_score = score;
            best = m;
        }
    }
    return best;
}

MmpSelection mmp_select(const Matrix& residual, const Matrix& atoms, Variant variant) {
    if (variant != Variant::MMP1 && variant != Variant::MMP2)
        throw ConfigError("real atom table requires MMP1 or MMP2");
    if (atoms.cols() < 1) throw ConfigError("empty dictionary");
    if (atoms.rows() != residual.rows()) throw ShapeError("atom length mismatch");

    // projections(m, c) = <residual[c], atom_m>
    const Matrix projections = atoms.transpose() * residual;
    Index best = 0;
    double best_score = -1.0;
    for (Index m = 0; m < atoms.cols(); ++m) {
        const double score = variant == Variant::MMP1 ? projections.row(m).squaredNorm()
                                                      : std::abs(projections.row(m).sum());
        if (score > best_score) {
            best_score = score;
            best = m;
        }
    }
    MmpSelection sel;
    sel.atom = best;
    sel.amplitudes = projections.row(best).transpose();
    sel.phases = Vector::Zero(residual.cols());
    return sel;
}

MmpSelection mmp_select(const Matrix& residual, const ComplexMatrix& atoms, Variant variant) {
    if (variant != Variant::MMP3 && variant != Variant::MMP4)
        throw ConfigError("analytic atom table requires MMP3 or MMP4");
    if (atoms.cols() < 1) throw ConfigError("empty dictionary");
    if (atoms.rows() != residual.rows()) throw ShapeError("atom length mismatch");

    // z(m, c) = <residual[c], atom_m> with the atom conjugated.
    const ComplexMatrix z = atoms.adjoint() * residual;
    Index best = 0;
    double best_score = -1.0;
    for (Index m = 0; m < atoms.cols(); ++m) {
        const double score = variant == Variant::MMP3 ? z.row(m).squaredNorm()
                                                      : std::abs(z.row(m).sum());
        if (score > best_score) {
            best_score = score;
            best = m;
        }
    }

    const Index c = residual.cols();
    MmpSelection sel;
    sel.atom = best;
    sel.amplitudes = Vector(c);
    sel.phases = Vector(c);
    for (Index ch = 0; ch < c; ++ch) {
        const std::complex<double> zc = z(best, ch);
        const double phase = wrap_phase(std::arg(zc));
        // The subtracted waveform is Re(atom * e^{i phase}) renormalized to
        // unit norm; the projection onto it is |z| / ||Re(atom e^{i phase})||.
        const Vector real_atom =
            (atoms.col(best) * std::polar(1.0, phase)).real();
        const double rnorm = real_atom.norm();
        sel.phases[ch] = phase;
        sel.amplitudes[ch] = rnorm > 0.0 ? std::abs(zc) / rnorm : 0.0;
    }
    return sel;
}

namespace {

/// Unit-norm real waveform a complex selection subtracts on one channel.
Vector rotated_real_atom(const ComplexVector& atom, double phase) {
    Vector r = (atom * std::polar(1.0, phase)).real();
    const double n = r.norm();
    if (n > 0.0) r /= n;
    return r;
}

template <typename AtomTable>
DecompositionResult decompose_table(const Matrix& signal, const AtomTable& atoms,
                                    const PursuitConfig& config) {
    constexpr bool kComplex = std::is_same_v<AtomTable, ComplexMatrix>;
    const Variant v = config.variant;
    if constexpr (kComplex) {
        if (v != Variant::MMP3 && v != Variant::MMP4)
            throw ConfigError("analytic atom table requires MMP3 or MMP4");
    } else {
        if (v == Variant::MMP3 || v == Variant::MMP4)
            throw ConfigError("MMP3/MMP4 require an analytic atom table");
        if ((v == Variant::MP || v == Variant::OMP) && signal.cols() != 1)
            throw ConfigError("MP/OMP are monochannel; use an MMP variant");
        if (v == Variant::MOMP)
            throw ConfigError("MOMP runs on a kernel dictionary, not an atom table");
    }
    if (atoms.rows() != signal.rows()) throw ShapeError("atom length mismatch");
    check_sparsity(config.sparsity, atoms.cols());

    const double signal_norm = signal.norm();
    DecompositionResult result;
    result.residual = signal;
    result.residual_norm_history.push_back(signal_norm);

    std::vector<Index> active;  // OMP only
    std::set<Index> active_set;

    for (Index k = 0; k < config.sparsity; ++k) {
        if constexpr (!kComplex) {
            if (v == Variant::OMP) {
                // Exclude already-selected atoms; their correlation is ~0
                // after re-projection but numerics could re-pick them.
                Index best = -1;
                double best_score = -1.0;
                for (Index m = 0; m < atoms.cols(); ++m) {
                    if (active_set.count(m)) continue;
                    const double score = std::abs(atoms.col(m).dot(result.residual.col(0)));
                    if (score > best_score) {
                        best_score = score;
                        best = m;
                    }
                }
                if (best < 0) break;  // dictionary exhausted
                active.push_back(best);
                active_set.insert(best);

                std::vector<Matrix> active_atoms;
                active_atoms.reserve(active.size());
                for (Index m : active) active_atoms.push_back(atoms.col(m));
                const Vector coeffs =
                    orthogonal_project(signal, active_atoms, &result.gram_regularized);
                result.residual = signal;
                for (std::size_t i = 0; i < active.size(); ++i)
                    result.residual.col(0) -= coeffs[static_cast<Index>(i)] *
                                              atoms.col(active[i]);
                // Rebuild the code with the re-projected coefficients.
                result.channel_code.entries.clear();
                for (std::size_t i = 0; i < active.size(); ++i) {
                    MultichannelEntry e;
                    e.atom = active[i];
                    e.amplitudes = Vector::Constant(1, coeffs[static_cast<Index>(i)]);
                    e.phases = Vector::Zero(1);
                    result.channel_code.entries.push_back(std::move(e));
                }
            } else {
                MmpSelection sel;
                if (v == Variant::MP) {
                    sel.atom = mp_select_mono(result.residual.col(0), atoms);
                    sel.amplitudes =
                        Vector::Constant(1, atoms.col(sel.atom).dot(result.residual.col(0)));
                    sel.phases = Vector::Zero(1);
                } else {
                    sel = mmp_select(result.residual, atoms, v);
                }
                for (Index ch = 0; ch < signal.cols(); ++ch)
                    result.residual.col(ch) -= sel.amplitudes[ch] * atoms.col(sel.atom);
                result.channel_code.entries.push_back(
                    MultichannelEntry{sel.atom, sel.amplitudes, sel.phases});
            }
        } else {
            const MmpSelection sel = mmp_select(result.residual, atoms, v);
            for (Index ch = 0; ch < signal.cols(); ++ch) {
                const Vector r = rotated_real_atom(atoms.col(sel.atom), sel.phases[ch]);
                result.residual.col(ch) -= sel.amplitudes[ch] * r;
            }
            result.channel_code.entries.push_back(
                MultichannelEntry{sel.atom, sel.amplitudes, sel.phases});
        }

        result.residual_norm_history.push_back(result.residual.norm());
        if (config.residual_tolerance > 0.0 &&
            result.residual_norm_history.back() < config.residual_tolerance * signal_norm)
            break;
    }
    return result;
}

}  // namespace

DecompositionResult decompose(const Matrix& signal, const Matrix& atoms,
                              const PursuitConfig& config) {
    return decompose_table(signal, atoms, config);
}

DecompositionResult decompose(const Matrix& signal, const ComplexMatrix& atoms,
                              const PursuitConfig& config) {
    return decompose_table(signal, atoms, config);
}

Vector orthogonal_project(const Matrix& signal, const std::vector<Matrix>& active_atoms,
                          bool* regularized) {
    if (active_atoms.empty()) throw ConfigError("empty active set");
    const Index k = static_cast<Index>(active_atoms.size());
    for (const auto& a : active_atoms)
        if (a.rows() != signal.rows() || a.cols() != signal.cols())
            throw ShapeError("active atom shape mismatch");

    Matrix gram(k, k);
    Vector rhs(k);
    for (Index i = 0; i < k; ++i) {
        rhs[i] = multivariate_inner(signal, active_atoms[static_cast<std::size_t>(i)]);
        for (Index j = 0; j <= i; ++j) {
            const double g = multivariate_inner(active_atoms[static_cast<std::size_t>(i)],
                                                active_atoms[static_cast<std::size_t>(j)]);
            gram(i, j) = g;
            gram(j, i) = g;
        }
    }

    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success) {
        gram.diagonal().array() += 1e-10;
        llt.compute(gram);
        if (regularized) *regularized = true;
        if (llt.info() != Eigen::Success)
            throw SolverError("active-set Gram matrix is singular");
    }
    return llt.solve(rhs);
}

namespace {

struct Candidate {
    Index kernel = -1;
    Index shift = 0;
    double value = 0.0;  // signed correlation
};

}  // namespace

DecompositionResult momp_decompose(const Matrix& signal, const KernelDictionary& dict,
                                   const PursuitConfig& config,
                                   std::optional<ShiftInterval> interval) {
    if (config.variant != Variant::MOMP)
        throw ConfigError("momp_decompose requires the MOMP variant");
    if (dict.channels() != signal.cols())
        throw ShapeError("dictionary and signal channel counts differ");
    const Index n = signal.rows();
    const Index l_count = dict.size();

    Index total_atoms = 0;
    std::vector<std::pair<Index, Index>> ranges(static_cast<std::size_t>(l_count));
    for (Index l = 0; l < l_count; ++l) {
        const Index t = dict.kernels[static_cast<std::size_t>(l)].length();
        if (t > n) throw LengthError("kernel longer than signal");
        Index lo = 0, hi = n - t;
        if (interval) {
            lo = std::max<Index>(lo, interval->center - interval->halfwidth);
            hi = std::min<Index>(hi, interval->center + interval->halfwidth);
        }
        ranges[static_cast<std::size_t>(l)] = {lo, hi};
        if (hi >= lo) total_atoms += hi - lo + 1;
    }
    if (total_atoms == 0) throw ConfigError("shift interval excludes every candidate");
    check_sparsity(config.sparsity, total_atoms);

    const double signal_norm = signal.norm();
    DecompositionResult result;
    result.residual = signal;
    result.residual_norm_history.push_back(signal_norm);

    std::set<std::pair<Index, Index>> active_pairs;
    std::vector<Matrix> active_atoms;
    std::vector<Candidate> per_kernel(static_cast<std::size_t>(l_count));

    for (Index k = 0; k < config.sparsity; ++k) {
        // Candidate scoring per kernel is independent; the argmax scan below
        // runs in kernel order so results do not depend on scheduling.
        parallel_for(static_cast<std::size_t>(l_count), [&](std::size_t li) {
            const auto [lo, hi] = ranges[li];
            Candidate best;
            if (hi < lo) {
                per_kernel[li] = best;
                return;
            }
            const Matrix& w = dict.kernels[li].waveform;
            Vector corr;
            if (interval) {
                // Narrow window: evaluate the few admissible lags directly.
                corr.resize(hi - lo + 1);
                for (Index tau = lo; tau <= hi; ++tau) {
                    double acc = 0.0;
                    for (Index ch = 0; ch < w.cols(); ++ch)
                        acc += result.residual.col(ch).segment(tau, w.rows()).dot(w.col(ch));
                    corr[tau - lo] = acc;
                }
            } else {
                corr = correlate_all_shifts(result.residual, w, config.correlation);
            }
            best.kernel = static_cast<Index>(li);
            double best_score = -1.0;
            for (Index tau = lo; tau <= hi; ++tau) {
                if (active_pairs.count({static_cast<Index>(li), tau})) continue;
                const double score = std::abs(corr[tau - lo]);
                if (score > best_score) {
                    best_score = score;
                    best.shift = tau;
                    best.value = corr[tau - lo];
                }
            }
            if (best_score < 0.0) best.kernel = -1;  // every shift already active
            per_kernel[li] = best;
        });

        Candidate chosen;
        double chosen_score = -1.0;
        for (const Candidate& c : per_kernel) {
            if (c.kernel < 0) continue;
            if (std::abs(c.value) > chosen_score) {
                chosen_score = std::abs(c.value);
                chosen = c;
            }
        }
        if (chosen.kernel < 0) break;  // all candidates active

        active_pairs.insert({chosen.kernel, chosen.shift});
        active_atoms.push_back(instantiate_atom(
            dict.kernels[static_cast<std::size_t>(chosen.kernel)], chosen.shift, n));
        result.code.entries.push_back(SparseEntry{chosen.kernel, chosen.shift, 0.0});

        const Vector coeffs =
            orthogonal_project(signal, active_atoms, &result.gram_regularized);
        for (std::size_t i = 0; i < active_atoms.size(); ++i)
            result.code.entries[i].coefficient = coeffs[static_cast<Index>(i)];

        result.residual = signal;
        for (std::size_t i = 0; i < active_atoms.size(); ++i)
            result.residual -= coeffs[static_cast<Index>(i)] * active_atoms[i];

        result.residual_norm_history.push_back(result.residual.norm());
        if (config.residual_tolerance > 0.0 &&
            result.residual_norm_history.back() < config.residual_tolerance * signal_norm)
            break;
    }
    return result;
}

DecompositionResult momp_decompose(const MultivariateSignal& signal,
                                   const KernelDictionary& dict, const PursuitConfig& config,
                                   std::optional<ShiftInterval> interval) {
    return momp_decompose(signal.samples, dict, config, interval);
}

}  // namespace mvdict
