// Acceptance suite: one self-contained check per criterion, each printing a
// single [PASS]/[FAIL] line. Run all with no arguments or one of them with
// --criterion N. Exit code 0 iff every requested criterion passed.

#include <mvdict/dla.hpp>
#include <mvdict/evoked.hpp>
#include <mvdict/experiments.hpp>
#include <mvdict/filter.hpp>
#include <mvdict/gabor.hpp>
#include <mvdict/io.hpp>
#include <mvdict/metrics.hpp>
#include <mvdict/ops.hpp>
#include <mvdict/parallel.hpp>
#include <mvdict/pursuit.hpp>
#include <mvdict/simulate.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace mvdict;
namespace fs = std::filesystem;

namespace {

std::string g_cli_path;

struct Check {
    bool pass = true;
    std::string details;

    void require(bool condition, const std::string& what) {
        if (!condition) {
            pass = false;
            if (!details.empty()) details += "; ";
            details += what;
        }
    }

    void note(const std::string& text) {
        if (!details.empty()) details += "; ";
        details += text;
    }
};

std::string fmt(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4g", v);
    return buffer;
}

Matrix random_matrix(Index rows, Index cols, Rng& rng) {
    Matrix m(rows, cols);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.gaussian();
    return m;
}

Matrix random_unit_atoms(Index n, Index m, Rng& rng) {
    Matrix atoms = random_matrix(n, m, rng);
    for (Index j = 0; j < m; ++j) atoms.col(j).normalize();
    return atoms;
}

ComplexMatrix random_complex_atoms(Index n, Index m, Rng& rng) {
    ComplexMatrix atoms(n, m);
    for (Index j = 0; j < m; ++j) {
        for (Index i = 0; i < n; ++i)
            atoms(i, j) = std::complex<double>(rng.gaussian(), rng.gaussian());
        atoms.col(j).normalize();
    }
    return atoms;
}

// ---------------------------------------------------------------------------
// 1. Shift-robustness trend: learned kernel vs grand average across sigma.
//    P = 200 trials, -10 dB, T = 65, C = 8, sigma in {0,2,4,6,8}, 10 reps.
//    mdla >= ga - 0.02 everywhere and mdla - ga >= 0.05 at sigma = 6.
// ---------------------------------------------------------------------------
Check criterion_1() {
    Check check;
    SweepConfig config;
    config.sigmas = {0, 2, 4, 6, 8};
    config.repetitions = 10;
    config.trials = 200;
    config.snr_db = -10.0;
    config.channels = 8;
    config.pattern_length = 65;
    config.epoch_length = 192;
    config.iterations = 20;
    config.seed = 20260808;

    const std::vector<SweepRow> rows = shift_robustness_sweep(config);
    for (const SweepRow& row : rows) {
        check.require(row.mean_mdla >= row.mean_ga - 0.02,
                      "sigma=" + fmt(row.sigma) + ": mdla " + fmt(row.mean_mdla) +
                          " < ga " + fmt(row.mean_ga) + " - 0.02");
        if (row.sigma == 6.0)
            check.require(row.mean_mdla - row.mean_ga >= 0.05,
                          "sigma=6 margin " + fmt(row.mean_mdla - row.mean_ga) + " < 0.05");
    }
    std::string summary;
    for (const SweepRow& row : rows)
        summary += "s" + fmt(row.sigma) + ":" + fmt(row.mean_ga) + "/" + fmt(row.mean_mdla) + " ";
    check.note("ga/mdla " + summary);
    return check;
}

// ---------------------------------------------------------------------------
// 2. Without overlap the least-squares estimate equals the grand average
//    to 1e-10 relative.
// ---------------------------------------------------------------------------
Check criterion_2() {
    Check check;
    Rng rng(612);
    const Index n = 64;
    const Matrix samples = random_matrix(1200, 6, rng);
    std::vector<Index> onsets;
    for (Index t = 3; t + n <= 1200; t += n + 7 + static_cast<Index>(rng.next_below(20)))
        onsets.push_back(t);
    const ContinuousRecord record = make_record(samples, onsets, 250.0);

    const EvokedPattern ls = ls_estimate(record, n);
    const EvokedPattern ga = grand_average(epoch_record(record, n));
    const double rel = (ls.waveform - ga.waveform).norm() / ga.waveform.norm();
    check.require(rel <= 1e-10, "relative difference " + fmt(rel) + " > 1e-10");
    check.note("P=" + std::to_string(onsets.size()) + " rel=" + fmt(rel));
    return check;
}

// ---------------------------------------------------------------------------
// 3. Planted-dictionary recovery, then the learned-dictionary-vs-Gabor
//    ordering at K = 3 with a >= 3x larger Gabor table.
// ---------------------------------------------------------------------------
Check criterion_3() {
    Check check;
    PlantedConfig config;
    config.kernel_count = 5;
    config.kernel_length = 32;
    config.channels = 4;
    config.trials = 300;
    config.epoch_length = 128;
    config.sparsity = 3;
    config.snr_db = 10.0;
    config.iterations = 30;
    config.seed = 33;

    const PlantedResult result = planted_recovery(config);
    check.require(result.mean_assignment_correlation >= 0.95,
                  "assignment correlation " + fmt(result.mean_assignment_correlation) +
                      " < 0.95");

    const Index learned_atoms =
        config.kernel_count * (config.epoch_length - config.kernel_length + 1);
    std::size_t target = static_cast<std::size_t>(3 * learned_atoms);
    if (target % 2) ++target;  // two phases per grid point
    const GaborGrid grid = default_gabor_grid(config.epoch_length, target);
    const GaborDictionary gabor = build_gabor_dictionary(grid);
    check.require(gabor.atom_count() >= 3 * learned_atoms, "gabor table smaller than 3x");

    const std::vector<Index> ks{3};
    const RhoCurve momp = rho_curve(result.trials, result.learned, ks);
    const RhoCurve mmp1 = rho_curve(result.trials, gabor.atoms, Variant::MMP1, ks);
    check.require(momp.rho[0] > mmp1.rho[0] + 0.05,
                  "rho(momp)=" + fmt(momp.rho[0]) + " not above rho(mmp1)=" +
                      fmt(mmp1.rho[0]) + " by 0.05");
    check.note("recovery=" + fmt(result.mean_assignment_correlation) +
               " rho momp/mmp1 at K=3: " + fmt(momp.rho[0]) + "/" + fmt(mmp1.rho[0]) +
               " (M " + std::to_string(learned_atoms) + "/" +
               std::to_string(gabor.atom_count()) + ")");
    return check;
}

// ---------------------------------------------------------------------------
// 4. Pursuit invariants on 100 random instances for all seven variants.
// ---------------------------------------------------------------------------
Check criterion_4() {
    Check check;
    Rng rng(44);
    const Index n = 32;
    const Matrix atoms = random_unit_atoms(n, 48, rng);
    const ComplexMatrix catoms = random_complex_atoms(n, 48, rng);
    std::vector<ShiftKernel> kernels;
    for (int l = 0; l < 4; ++l)
        kernels.push_back(normalized_kernel(random_matrix(7, 2, rng)));
    const KernelDictionary dict = make_dictionary(kernels);  // 4 * 26 = 104 candidates

    int monotonicity_failures = 0;
    int orthogonality_failures = 0;
    int selection_failures = 0;
    int equivalence_failures = 0;

    const auto monotone = [](const std::vector<double>& h) {
        for (std::size_t i = 1; i < h.size(); ++i)
            if (h[i] > h[i - 1] + 1e-12) return false;
        return true;
    };

    for (int instance = 0; instance < 100; ++instance) {
        const Matrix mono = random_matrix(n, 1, rng);
        const Matrix multi = random_matrix(n, 2, rng);

        PursuitConfig config;
        config.sparsity = 5;

        for (Variant v : {Variant::MP, Variant::OMP}) {
            config.variant = v;
            if (!monotone(decompose(mono, atoms, config).residual_norm_history))
                ++monotonicity_failures;
        }
        for (Variant v : {Variant::MMP1, Variant::MMP2}) {
            config.variant = v;
            if (!monotone(decompose(multi, atoms, config).residual_norm_history))
                ++monotonicity_failures;
        }
        for (Variant v : {Variant::MMP3, Variant::MMP4}) {
            config.variant = v;
            if (!monotone(decompose(multi, catoms, config).residual_norm_history))
                ++monotonicity_failures;
        }
        config.variant = Variant::MOMP;
        const DecompositionResult momp = momp_decompose(multi, dict, config);
        if (!monotone(momp.residual_norm_history)) ++monotonicity_failures;

        // OMP residual orthogonality, both the mono table OMP and M-OMP.
        config.variant = Variant::OMP;
        const DecompositionResult omp = decompose(mono, atoms, config);
        for (const auto& e : omp.channel_code.entries) {
            if (std::abs(atoms.col(e.atom).dot(omp.residual.col(0))) > 1e-8 * mono.norm())
                ++orthogonality_failures;
        }
        for (const auto& e : momp.code.entries) {
            const Matrix atom =
                instantiate_atom(dict.kernels[static_cast<std::size_t>(e.kernel)], e.shift, n);
            if (std::abs(multivariate_inner(momp.residual, atom)) > 1e-8 * multi.norm())
                ++orthogonality_failures;
        }

        // Selection matches the brute-force argmax (<= 200 candidates).
        {
            const Index got = mp_select_mono(mono.col(0), atoms);
            Index best = 0;
            double best_score = -1.0;
            for (Index m = 0; m < atoms.cols(); ++m) {
                const double s = std::abs(atoms.col(m).dot(mono.col(0)));
                if (s > best_score) {
                    best_score = s;
                    best = m;
                }
            }
            if (got != best) ++selection_failures;
        }
        {
            PursuitConfig one;
            one.variant = Variant::MOMP;
            one.sparsity = 1;
            const auto res = momp_decompose(multi, dict, one);
            Index best_l = 0, best_tau = 0;
            double best_score = -1.0;
            for (Index l = 0; l < dict.size(); ++l) {
                const ShiftKernel& k = dict.kernels[static_cast<std::size_t>(l)];
                for (Index tau = 0; tau + k.length() <= n; ++tau) {
                    const double s =
                        std::abs(multivariate_inner(multi, instantiate_atom(k, tau, n)));
                    if (s > best_score) {
                        best_score = s;
                        best_l = l;
                        best_tau = tau;
                    }
                }
            }
            if (res.code.entries[0].kernel != best_l || res.code.entries[0].shift != best_tau)
                ++selection_failures;
        }
        for (Variant v : {Variant::MMP1, Variant::MMP2, Variant::MMP3, Variant::MMP4}) {
            MmpSelection sel = (v == Variant::MMP3 || v == Variant::MMP4)
                                   ? mmp_select(multi, catoms, v)
                                   : mmp_select(multi, atoms, v);
            double best_score = -1.0;
            Index best = 0;
            for (Index m = 0; m < 48; ++m) {
                double score = 0.0;
                if (v == Variant::MMP1) {
                    for (Index c = 0; c < 2; ++c) {
                        const double ip = atoms.col(m).dot(multi.col(c));
                        score += ip * ip;
                    }
                } else if (v == Variant::MMP2) {
                    double sum = 0.0;
                    for (Index c = 0; c < 2; ++c) sum += atoms.col(m).dot(multi.col(c));
                    score = std::abs(sum);
                } else {
                    std::complex<double> sum = 0.0;
                    for (Index c = 0; c < 2; ++c) {
                        std::complex<double> z = 0.0;
                        for (Index t = 0; t < n; ++t)
                            z += multi(t, c) * std::conj(catoms(t, m));
                        if (v == Variant::MMP3)
                            score += std::norm(z);
                        else
                            sum += z;
                    }
                    if (v == Variant::MMP4) score = std::abs(sum);
                }
                if (score > best_score) {
                    best_score = score;
                    best = m;
                }
            }
            if (sel.atom != best) ++selection_failures;
        }

        // C = 1 equivalence of the selection rules.
        {
            const Index mp = mp_select_mono(mono.col(0), atoms);
            if (mmp_select(mono, atoms, Variant::MMP1).atom != mp) ++equivalence_failures;
            if (mmp_select(mono, atoms, Variant::MMP2).atom != mp) ++equivalence_failures;

            std::vector<ShiftKernel> full;
            for (Index m = 0; m < atoms.cols(); ++m)
                full.push_back(normalized_kernel(atoms.col(m)));
            PursuitConfig one;
            one.variant = Variant::MOMP;
            one.sparsity = 1;
            const auto res = momp_decompose(mono, make_dictionary(std::move(full)), one);
            if (res.code.entries[0].kernel != mp) ++equivalence_failures;
        }
    }

    // Polarity property on antiphase channels.
    {
        Eigen::HouseholderQR<Matrix> qr(random_matrix(16, 8, rng));
        const Matrix ortho = qr.householderQ() * Matrix::Identity(16, 8);
        Matrix anti(16, 2);
        anti.col(0) = ortho.col(3);
        anti.col(1) = -ortho.col(3);
        const MmpSelection s1 = mmp_select(anti, ortho, Variant::MMP1);
        const MmpSelection s2 = mmp_select(anti, ortho, Variant::MMP2);
        const double mmp2_score_for_3 =
            std::abs(ortho.col(3).dot(anti.col(0)) + ortho.col(3).dot(anti.col(1)));
        check.require(s1.atom == 3 && s1.amplitudes.squaredNorm() > 1.99,
                      "MMP1 missed the antiphase atom");
        check.require(mmp2_score_for_3 <= 1e-12 && s2.atom != 3,
                      "MMP2 did not cancel the antiphase atom");
    }

    check.require(monotonicity_failures == 0,
                  std::to_string(monotonicity_failures) + " monotonicity failures");
    check.require(orthogonality_failures == 0,
                  std::to_string(orthogonality_failures) + " orthogonality failures");
    check.require(selection_failures == 0,
                  std::to_string(selection_failures) + " selection failures");
    check.require(equivalence_failures == 0,
                  std::to_string(equivalence_failures) + " C=1 equivalence failures");
    check.note("100 instances, 7 variants, zero failures required");
    return check;
}

// ---------------------------------------------------------------------------
// 5. Kernel-length border: T_m through pass 66 of 100 and T_m + 40 after,
//    and a real training run never exceeds the per-pass border.
// ---------------------------------------------------------------------------
Check criterion_5() {
    Check check;
    for (int pass = 1; pass <= 100; ++pass) {
        const Index expected = pass <= 66 ? 80 : 120;
        const Index got = kernel_length_schedule(pass, 100, 80, 40);
        check.require(got == expected, "schedule(" + std::to_string(pass) + ") = " +
                                           std::to_string(got) + " != " +
                                           std::to_string(expected));
    }

    Rng rng(55);
    std::vector<Matrix> trials;
    for (int p = 0; p < 6; ++p) trials.push_back(random_matrix(64, 2, rng));
    LearnConfig config;
    config.kernel_count = 3;
    config.iterations = 100;
    config.sparsity = 1;
    config.initial_length = 10;
    config.limit_length = 16;
    config.length_extension = 40;
    config.rng_seed = 5;
    auto [dict, trace] = mdla_train(make_epoch_set(trials), config);
    for (std::size_t pass = 0; pass < trace.kernel_lengths.size(); ++pass) {
        const Index bound =
            kernel_length_schedule(static_cast<int>(pass) + 1, 100, 16, 40);
        for (Index length : trace.kernel_lengths[pass])
            check.require(length <= bound, "pass " + std::to_string(pass + 1) +
                                               " kernel length " + std::to_string(length) +
                                               " > " + std::to_string(bound));
    }
    check.note("boundary at pass 66/67 and 100-pass training bounds hold");
    return check;
}

// ---------------------------------------------------------------------------
// 6. Metric contracts: exact rho arithmetic, monotone rho in K for every
//    variant on 20 random instances, shift/sign invariance of the
//    correlation metric.
// ---------------------------------------------------------------------------
Check criterion_6() {
    Check check;
    Rng rng(66);

    {
        std::vector<Matrix> trials{random_matrix(10, 2, rng), random_matrix(10, 2, rng)};
        const EpochSet set = make_epoch_set(trials);
        const std::vector<Matrix> zero{Matrix::Zero(10, 2), Matrix::Zero(10, 2)};
        check.require(reconstruction_rate(set, zero) == 1.0, "rho(zero residuals) != 1");
        check.require(reconstruction_rate(set, trials) == 0.0, "rho(full residuals) != 0");
        const std::vector<Matrix> mixed{0.5 * trials[0], 0.25 * trials[1]};
        check.require(std::abs(reconstruction_rate(set, mixed) - 0.625) < 1e-15,
                      "rho(0.5, 0.25) != 0.625");
    }

    const Index n = 24;
    const Matrix atoms = random_unit_atoms(n, 20, rng);
    const ComplexMatrix catoms = random_complex_atoms(n, 20, rng);
    std::vector<ShiftKernel> kernels;
    for (int l = 0; l < 3; ++l)
        kernels.push_back(normalized_kernel(random_matrix(6, 2, rng)));
    const KernelDictionary dict = make_dictionary(kernels);
    const std::vector<Index> ks{0, 1, 2, 3, 5, 8};

    int violations = 0;
    const auto count_violations = [&](const RhoCurve& curve) {
        for (std::size_t i = 1; i < curve.rho.size(); ++i)
            if (curve.rho[i] < curve.rho[i - 1] - 1e-12) ++violations;
    };
    for (int instance = 0; instance < 20; ++instance) {
        const EpochSet mono = make_epoch_set({random_matrix(n, 1, rng)});
        const EpochSet multi = make_epoch_set({random_matrix(n, 2, rng)});
        count_violations(rho_curve(mono, atoms, Variant::MP, ks));
        count_violations(rho_curve(mono, atoms, Variant::OMP, ks));
        count_violations(rho_curve(multi, atoms, Variant::MMP1, ks));
        count_violations(rho_curve(multi, atoms, Variant::MMP2, ks));
        count_violations(rho_curve(multi, catoms, Variant::MMP3, ks));
        count_violations(rho_curve(multi, catoms, Variant::MMP4, ks));
        count_violations(rho_curve(multi, dict, ks));
    }
    check.require(violations == 0,
                  std::to_string(violations) + " rho monotonicity violations");

    for (int i = 0; i < 10; ++i) {
        const Matrix pattern = random_matrix(20, 3, rng);
        Matrix shifted = Matrix::Zero(27, 3);
        shifted.middleRows(4, 20) = pattern;
        check.require(std::abs(max_correlation(shifted, pattern) - 1.0) <= 1e-9,
                      "shift invariance broken");
        check.require(std::abs(max_correlation(Matrix(-pattern), pattern) - 1.0) <= 1e-9,
                      "sign invariance broken");
    }
    check.note("exact arithmetic, 20 instances x 7 variants monotone, invariances at 1e-9");
    return check;
}

// ---------------------------------------------------------------------------
// 7. Determinism of the learn/simulate/fig8 commands: identical bytes for
//    identical seeds, and threads 1 vs N within 1e-12 on the aggregate.
// ---------------------------------------------------------------------------
Check criterion_7() {
    Check check;
    if (g_cli_path.empty()) {
        check.pass = false;
        check.details = "CLI path not provided (--cli)";
        return check;
    }

    const fs::path dir =
        fs::temp_directory_path() / ("mvdict_acc7_" + std::to_string(::getpid()));
    fs::create_directories(dir);

    const auto shell = [&](const std::string& args) {
        const std::string cmd = g_cli_path + " " + args + " > /dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    const auto bytes = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    const std::string sim_args = "--t 16 --c 3 --p 30 --n 64 --sigma 2 --snr -8 --seed 7";
    check.require(shell("simulate " + sim_args + " --out " + (dir / "s1.mvsg").string()) == 0,
                  "simulate run 1 failed");
    check.require(shell("simulate " + sim_args + " --out " + (dir / "s2.mvsg").string()) == 0,
                  "simulate run 2 failed");
    check.require(bytes(dir / "s1.mvsg") == bytes(dir / "s2.mvsg"),
                  "simulate outputs differ between identical runs");

    const std::string learn_args =
        "--input " + (dir / "s1.mvsg").string() + " --l 3 --iters 8 --k 2 --ti 8 --tm 12 --seed 3";
    check.require(shell("learn " + learn_args + " --out " + (dir / "d1.mvdk").string()) == 0,
                  "learn run 1 failed");
    check.require(shell("learn " + learn_args + " --out " + (dir / "d2.mvdk").string()) == 0,
                  "learn run 2 failed");
    check.require(bytes(dir / "d1.mvdk") == bytes(dir / "d2.mvdk"),
                  "learn outputs differ between identical runs");

    const std::string fig8_args =
        "fig8 --sigmas 0,3 --reps 2 --p 20 --n 80 --t 25 --c 3 --iters 4 --seed 9 --out ";
    check.require(shell("--quiet " + fig8_args + (dir / "f1.csv").string()) == 0,
                  "fig8 run 1 failed");
    check.require(shell("--quiet " + fig8_args + (dir / "f2.csv").string()) == 0,
                  "fig8 run 2 failed");
    check.require(bytes(dir / "f1.csv") == bytes(dir / "f2.csv"),
                  "fig8 outputs differ between identical runs");

    check.require(shell("--quiet --threads 1 " + fig8_args + (dir / "t1.csv").string()) == 0,
                  "fig8 threads=1 failed");
    check.require(shell("--quiet --threads 4 " + fig8_args + (dir / "t4.csv").string()) == 0,
                  "fig8 threads=4 failed");

    // Compare the aggregates numerically.
    const auto read_csv_values = [](const fs::path& p) {
        std::vector<double> values;
        std::ifstream in(p);
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            const auto last = line.rfind(',');
            if (last != std::string::npos) values.push_back(std::stod(line.substr(last + 1)));
        }
        return values;
    };
    const std::vector<double> v1 = read_csv_values(dir / "t1.csv");
    const std::vector<double> v4 = read_csv_values(dir / "t4.csv");
    check.require(v1.size() == v4.size() && !v1.empty(), "thread sweep row mismatch");
    double max_diff = 0.0;
    for (std::size_t i = 0; i < v1.size() && i < v4.size(); ++i)
        max_diff = std::max(max_diff, std::abs(v1[i] - v4[i]));
    check.require(max_diff <= 1e-12,
                  "threads 1 vs 4 aggregate differs by " + fmt(max_diff));

    fs::remove_all(dir);
    check.note("byte-identical reruns; threads max diff " + fmt(max_diff));
    return check;
}

// ---------------------------------------------------------------------------
// 8. Filter checks for the 1-20 Hz order-3 design at 240 Hz.
// ---------------------------------------------------------------------------
Check criterion_8() {
    Check check;
    const double rate = 240.0;
    const SosFilter filter = design_butterworth_bandpass({1.0, 20.0, 3}, rate);

    // Band-center gain vs the analytic response of the designed filter.
    const Index n = static_cast<Index>(40 * rate);
    const Index tail = n / 2;
    for (double hz : {std::sqrt(20.0), 4.0, 12.0}) {
        Vector x(n);
        for (Index t = 0; t < n; ++t)
            x[t] = std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(t) / rate);
        const Vector y = filter.apply(x);
        const double measured =
            y.tail(tail).norm() / std::sqrt(static_cast<double>(tail)) * std::numbers::sqrt2;
        const double designed = std::abs(filter.response(hz));
        const double db = 20.0 * std::log10(measured / designed);
        check.require(std::abs(db) <= 1.0,
                      fmt(hz) + " Hz gain off by " + fmt(db) + " dB");
    }

    // DC suppression after the transient: >= 60 dB.
    const Vector dc = filter.apply(Vector::Ones(static_cast<Index>(20 * rate)));
    const Index dc_tail = static_cast<Index>(5 * rate);
    const double dc_rms = dc.tail(dc_tail).norm() / std::sqrt(static_cast<double>(dc_tail));
    check.require(dc_rms <= 1e-3, "DC rms " + fmt(dc_rms) + " above -60 dB");
    check.note("band gains within 1 dB; DC residue " + fmt(20.0 * std::log10(dc_rms)) + " dB");
    return check;
}

}  // namespace

int main(int argc, char** argv) {
    int requested = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) requested = std::atoi(argv[++i]);
        if (arg == "--cli" && i + 1 < argc) g_cli_path = argv[++i];
    }

    const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
        {"shift-robustness trend (learned kernel vs grand average)", criterion_1},
        {"LS estimate equals grand average without overlap", criterion_2},
        {"planted-dictionary recovery and rho ordering vs Gabor", criterion_3},
        {"pursuit invariant suite over all variants", criterion_4},
        {"kernel-length border schedule", criterion_5},
        {"metric contracts", criterion_6},
        {"seeded determinism and thread independence", criterion_7},
        {"Butterworth bandpass checks", criterion_8},
    };

    bool all_pass = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int number = static_cast<int>(i) + 1;
        if (requested != 0 && requested != number) continue;
        const auto start = std::chrono::steady_clock::now();
        Check check;
        try {
            check = criteria[i].second();
        } catch (const std::exception& e) {
            check.pass = false;
            check.details = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s (%s) [%.1fs]\n", check.pass ? "PASS" : "FAIL",
                    number, criteria[i].first.c_str(), check.details.c_str(), seconds);
        all_pass = all_pass && check.pass;
    }
    return all_pass ? 0 : 1;
}
