#include <doctest.h>

#include <mvdict/evoked.hpp>
#include <mvdict/experiments.hpp>
#include <mvdict/metrics.hpp>
#include <mvdict/ops.hpp>
#include <mvdict/simulate.hpp>

#include <cmath>

using namespace mvdict;

namespace {

Matrix random_matrix(Index rows, Index cols, Rng& rng) {
    Matrix m(rows, cols);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.gaussian();
    return m;
}

}  // namespace

TEST_CASE("epoch_record cuts onset-aligned windows") {
    Rng rng(3);
    const Matrix samples = random_matrix(50, 3, rng);

    SUBCASE("one onset at zero with full length returns the record") {
        const ContinuousRecord rec = make_record(samples, {0});
        const EpochSet set = epoch_record(rec, 50);
        REQUIRE(set.count() == 1);
        CHECK((set.epochs[0] - samples).norm() == 0.0);
    }

    SUBCASE("each onset yields one N x C epoch holding the planted pattern") {
        Rng r(5);
        const ShiftKernel pattern = normalized_kernel(random_matrix(6, 2, r));
        Matrix record = Matrix::Zero(100, 2);
        const std::vector<Index> onsets{5, 30, 62};
        for (Index t : onsets)
            record.middleRows(t + 2, 6) += pattern.waveform;  // offset 2 inside the epoch
        const EpochSet set = epoch_record(make_record(record, onsets), 12);
        REQUIRE(set.count() == 3);
        for (const Matrix& e : set.epochs) {
            CHECK(e.rows() == 12);
            CHECK((e.middleRows(2, 6) - pattern.waveform).norm() <= 1e-12);
        }
    }

    SUBCASE("overflowing onset is a range error") {
        const ContinuousRecord rec = make_record(samples, {45});
        CHECK_THROWS_AS(epoch_record(rec, 10), RangeError);
    }
}

TEST_CASE("grand_average") {
    Rng rng(7);
    const Matrix a = random_matrix(10, 2, rng);

    SUBCASE("single epoch is its own average") {
        const EvokedPattern ga = grand_average(make_epoch_set({a}));
        CHECK((ga.waveform - a).norm() == 0.0);
    }

    SUBCASE("opposite epochs cancel") {
        const EvokedPattern ga = grand_average(make_epoch_set({a, -a}));
        CHECK(ga.waveform.norm() == 0.0);
    }

    SUBCASE("sqrt(P) averaging gain at -10 dB") {
        const Matrix pattern = reference_ep_pattern(20, 3);
        Rng r(11);
        std::vector<Matrix> epochs;
        for (int p = 0; p < 1000; ++p) {
            Matrix noise = random_matrix(40, 3, r);
            noise *= pattern.norm() * std::pow(10.0, 0.5) / noise.norm();  // -10 dB
            Matrix y = Matrix::Zero(40, 3);
            y.middleRows(10, 20) = pattern;
            epochs.push_back(y + noise);
        }
        const EvokedPattern ga = grand_average(make_epoch_set(epochs));
        CHECK(max_correlation(ga.waveform, pattern) >= 0.95);
    }
}

TEST_CASE("ls_estimate equals the grand average without overlap") {
    Rng rng(13);
    const Index n = 16;
    Matrix record = random_matrix(130, 3, rng);
    const std::vector<Index> onsets{0, 20, 41, 70, 100};  // gaps >= n
    const ContinuousRecord rec = make_record(record, onsets);

    const EvokedPattern ls = ls_estimate(rec, n);
    const EvokedPattern ga = grand_average(epoch_record(rec, n));
    CHECK((ls.waveform - ga.waveform).norm() <= 1e-10 * ga.waveform.norm());
}

TEST_CASE("ls_estimate with a single onset returns the epoch") {
    Rng rng(17);
    const Matrix record = random_matrix(30, 2, rng);
    const ContinuousRecord rec = make_record(record, {8});
    const EvokedPattern ls = ls_estimate(rec, 12);
    CHECK((ls.waveform - record.middleRows(8, 12)).norm() <= 1e-10);
}

TEST_CASE("ls_estimate deconvolves overlapping responses where GA cannot") {
    Rng rng(19);
    const Index n = 20;
    Matrix pattern = random_matrix(n, 2, rng);

    // Overlap at lag n/2; the noiseless system Y = D * pattern is consistent.
    const std::vector<Index> onsets{0, 10, 20, 30, 40};
    Matrix record = Matrix::Zero(40 + n, 2);
    for (Index t : onsets) record.middleRows(t, n) += pattern;
    const ContinuousRecord rec = make_record(record, onsets);

    const EvokedPattern ls = ls_estimate(rec, n);
    CHECK((ls.waveform - pattern).norm() <= 1e-8);

    const EvokedPattern ga = grand_average(epoch_record(rec, n));
    CHECK((ga.waveform - pattern).norm() > 1e-3 * pattern.norm());
}

TEST_CASE("learn_ep_kernel fixes the noiseless planted case") {
    const Index t = 16, n = 48;
    const Matrix pattern = reference_ep_pattern(t, 4);
    const ShiftKernel kernel = normalized_kernel(pattern);

    std::vector<Matrix> epochs;
    Rng rng(23);
    const Index center_shift = 20;
    for (int p = 0; p < 30; ++p) {
        const double amp = 0.7 + 0.6 * rng.uniform();
        epochs.push_back(amp * instantiate_atom(kernel, center_shift, n));
    }
    const EpochSet set = make_epoch_set(epochs, 240.0);

    const EvokedPattern init = grand_average(set);
    // kernel center at (20 + 8) samples -> ms at 240 Hz
    const double center_ms = (20.0 + 8.0) / 240.0 * 1000.0;
    const EvokedPattern learned = learn_ep_kernel(set, init, t, center_ms, 4, 10);
    CHECK(max_correlation(learned.waveform, pattern) >= 0.999);
    CHECK(std::abs(learned.waveform.norm() - 1.0) <= 1e-10);
}

TEST_CASE("learn_ep_kernel runs the 65-sample, 9-point-interval protocol") {
    // T = 65 samples at 240 Hz, interval halfwidth 4 (9 points), 20 passes.
    SimulationSpec spec;
    spec.reference = reference_ep_pattern(65, 64);
    spec.trials = 24;
    spec.epoch_length = 180;
    spec.shift_mean = 40.0;
    spec.shift_std = 2.0;
    spec.snr_db = 0.0;
    spec.noise = FirNoiseModel::default_model(64);
    spec.rng_seed = 29;
    auto [epochs, truth] = generate_trials(spec);

    const EvokedPattern init = grand_average(epochs);
    const double center_ms = (40.0 + 32.0) / 240.0 * 1000.0;
    const EvokedPattern learned = learn_ep_kernel(epochs, init, 65, center_ms, 4, 20);
    CHECK(learned.waveform.rows() == 65);
    CHECK(learned.waveform.cols() == 64);
    CHECK(std::abs(learned.waveform.norm() - 1.0) <= 1e-10);
}

TEST_CASE("learned kernel beats GA on widely shifted patterns") {
    SweepConfig config;
    config.sigmas = {6.0};
    config.repetitions = 1;
    config.trials = 200;
    config.seed = 31;
    const SweepCell cell = shift_robustness_cell(config, 6.0, 0);
    CHECK(cell.mdla > cell.ga);
}

TEST_CASE("spatial_pattern") {
    SUBCASE("single channel returns its peak value") {
        Matrix w(5, 1);
        w << 0.1, -0.2, 0.9, 0.3, 0.0;
        const Vector s = spatial_pattern(EvokedPattern{w, false});
        REQUIRE(s.size() == 1);
        CHECK(s[0] == doctest::Approx(0.9));
    }

    SUBCASE("rank-1 pattern returns the weight vector at the peak") {
        Vector a(6);
        a << 0.1, 0.4, -1.2, 0.5, 0.2, 0.0;
        Vector w(3);
        w << 1.0, -0.5, 0.25;
        const Matrix pattern = a * w.transpose();
        const Vector s = spatial_pattern(EvokedPattern{pattern, false});
        CHECK((s - (-1.2) * w).norm() <= 1e-12);
    }

    SUBCASE("absmax rule follows the dominant entry") {
        Matrix w = Matrix::Zero(4, 2);
        w(1, 1) = -3.0;
        w(2, 0) = 1.0;
        const Vector s = spatial_pattern(EvokedPattern{w, false}, PeakRule::absmax);
        CHECK(s[1] == doctest::Approx(-3.0));
    }

    SUBCASE("appending zero rows changes nothing") {
        Rng rng(37);
        Matrix w = random_matrix(8, 3, rng);
        Matrix padded = Matrix::Zero(12, 3);
        padded.topRows(8) = w;
        CHECK((spatial_pattern(EvokedPattern{w, false}) -
               spatial_pattern(EvokedPattern{padded, false}))
                  .norm() == 0.0);
    }
}

TEST_CASE("to_average_reference") {
    Rng rng(41);

    SUBCASE("constant-across-channels becomes zero") {
        Matrix w = Matrix::Ones(6, 4);
        w.col(0).setConstant(1.0);
        const Matrix out = to_average_reference(Matrix(Matrix::Ones(6, 4)));
        CHECK(out.norm() == 0.0);
    }

    SUBCASE("rows sum to zero and the map is idempotent") {
        const Matrix w = random_matrix(8, 4, rng);
        const Matrix once = to_average_reference(w);
        CHECK(once.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((to_average_reference(once) - once).norm() <= 1e-12);
    }

    SUBCASE("linearity") {
        const Matrix a = random_matrix(8, 4, rng);
        const Matrix b = random_matrix(8, 4, rng);
        CHECK((to_average_reference(Matrix(a + b)) -
               (to_average_reference(a) + to_average_reference(b)))
                  .norm() <= 1e-12);
    }

    SUBCASE("single channel is rejected") {
        CHECK_THROWS_AS(to_average_reference(Matrix(Matrix::Ones(4, 1))), ShapeError);
    }
}

TEST_CASE("normalization helpers enforce the sign convention") {
    Rng rng(43);
    Matrix w = random_matrix(30, 3, rng);
    const EvokedPattern n1 = normalize_pattern(EvokedPattern{w, false});
    const EvokedPattern n2 = normalize_pattern(EvokedPattern{-w, false});
    CHECK((n1.waveform - n2.waveform).norm() == 0.0);  // sign-invariant
    CHECK(std::abs(n1.waveform.norm() - 1.0) <= 1e-10);

    const EvokedPattern cut = truncate_and_normalize(EvokedPattern{w, false}, 12);
    CHECK(cut.waveform.rows() == 12);
    CHECK(std::abs(cut.waveform.norm() - 1.0) <= 1e-10);
}
