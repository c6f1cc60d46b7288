#include <doctest.h>

#include <mvdict/gabor.hpp>

#include <cmath>
#include <numbers>

using namespace mvdict;

namespace {

constexpr double kPi = std::numbers::pi;

// Direct-formula oracle, independent of the implementation.
Vector sample_formula(double s, double center, double f, double phase, Index n) {
    Vector v(n);
    for (Index t = 0; t < n; ++t) {
        const double z = (static_cast<double>(t) - center) / s;
        v[t] = (1.0 / std::sqrt(s)) * std::exp(-kPi * z * z) *
               std::cos(2.0 * kPi * f * static_cast<double>(t) + phase);
    }
    return v;
}

}  // namespace

TEST_CASE("gabor_atom matches the sampled formula after normalization") {
    GaborParams p;
    p.scale = 4.0;
    p.shift_index = 8;
    p.shift_factor = 1.0;  // center = 32
    p.frequency = 0.25;
    p.phase = 0.0;
    const Vector atom = gabor_atom(p, 64);

    Vector expected = sample_formula(4.0, 32.0, 0.25, 0.0, 64);
    expected /= expected.norm();
    CHECK((atom - expected).norm() <= 1e-12);
    // At t = 32 the window is at its peak and cos(16*pi) = 1.
    const double beta = 1.0 / sample_formula(4.0, 32.0, 0.25, 0.0, 64).norm();
    CHECK(atom[32] == doctest::Approx(beta * 0.5).epsilon(1e-12));
}

TEST_CASE("zero-frequency atom is a symmetric positive bump") {
    GaborParams p;
    p.scale = 8.0;
    p.shift_index = 4;
    p.shift_factor = 1.0;  // center = 4 * 8 = n/2
    p.frequency = 0.0;
    const Vector atom = gabor_atom(p, 64);
    Index arg = 0;
    atom.maxCoeff(&arg);
    CHECK(arg == 32);
    CHECK(atom.minCoeff() >= 0.0);
    for (Index d = 1; d < 8; ++d)
        CHECK(atom[32 - d] == doctest::Approx(atom[32 + d]).epsilon(1e-12));
}

TEST_CASE("atoms are unit norm") {
    GaborParams p;
    p.scale = 16.0;
    p.shift_index = 3;
    p.shift_factor = 2.0;
    p.frequency = 0.37;
    p.phase = 1.1;
    CHECK(gabor_atom(p, 128).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(complex_gabor_atom(p, 128).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("complex atom reduces to the real atom at f = 0") {
    GaborParams p;
    p.scale = 8.0;
    p.shift_index = 3;  // center = 24
    p.shift_factor = 1.0;
    p.frequency = 0.0;
    p.phase = 0.0;
    const ComplexVector c = complex_gabor_atom(p, 64);
    const Vector r = gabor_atom(p, 64);
    CHECK((c.real() - r).norm() <= 1e-12);
    CHECK(c.imag().cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("complex atom matches its direct formula") {
    GaborParams p;
    p.scale = 6.0;
    p.shift_index = 4;  // center = 24
    p.shift_factor = 1.0;
    p.frequency = 0.125;
    const ComplexVector atom = complex_gabor_atom(p, 64);
    ComplexVector expected(64);
    for (Index t = 0; t < 64; ++t) {
        const double z = (static_cast<double>(t) - 24.0) / 6.0;
        const double w = (1.0 / std::sqrt(6.0)) * std::exp(-kPi * z * z);
        expected[t] = std::polar(w, 2.0 * kPi * 0.125 * static_cast<double>(t));
    }
    expected /= expected.norm();
    CHECK((atom - expected).norm() <= 1e-12);
}

TEST_CASE("grid enumeration counts and structure") {
    SUBCASE("degenerate grid has one atom") {
        GaborGrid g;
        g.signal_length = 64;
        g.scales = {8.0};
        g.alphas = {8.0};  // step alpha*s = 64 covers the frame once
        g.frequency_counts = {1};
        g.phases = {0.0};
        CHECK(g.atom_count() == 1);
        const GaborDictionary dict = build_gabor_dictionary(g);
        CHECK(dict.atom_count() == 1);
    }

    SUBCASE("doubling the frequency count doubles M") {
        GaborGrid g;
        g.signal_length = 100;
        g.scales = {4.0, 8.0};
        g.alphas = {1.0, 1.0};
        g.frequency_counts = {3, 3};
        g.phases = {0.0, kPi / 2.0};
        const std::size_t m = g.atom_count();
        g.frequency_counts = {6, 6};
        CHECK(g.atom_count() == 2 * m);
    }

    SUBCASE("default grid hits 30720 atoms at n = 501") {
        const GaborGrid g = default_gabor_grid(501);
        CHECK(g.atom_count() == 30720);
    }
}

TEST_CASE("index->params map is a bijection") {
    GaborGrid g;
    g.signal_length = 48;
    g.scales = {4.0, 8.0};
    g.alphas = {1.0, 1.0};
    g.frequency_counts = {2, 3};
    g.phases = {0.0, kPi / 2.0};
    const GaborDictionary dict = build_gabor_dictionary(g);
    REQUIRE(dict.params.size() == static_cast<std::size_t>(dict.atom_count()));
    for (Index m = 0; m < dict.atom_count(); ++m) {
        const Vector rebuilt = gabor_atom(dict.params[static_cast<std::size_t>(m)], 48);
        CHECK((rebuilt - dict.atoms.col(m)).norm() == 0.0);  // bit-for-bit
    }
}

TEST_CASE("adjacent in-bounds shifts are exact translates") {
    GaborParams a, b;
    a.scale = b.scale = 4.0;
    a.shift_factor = b.shift_factor = 1.0;
    a.frequency = b.frequency = 0.0;  // translate invariance holds at f = 0
    a.shift_index = 5;
    b.shift_index = 6;
    const Vector va = gabor_atom(a, 64);
    const Vector vb = gabor_atom(b, 64);
    // shifted by alpha*s = 4 samples
    CHECK((va.segment(8, 40) - vb.segment(12, 40)).norm() <= 1e-9);
}

TEST_CASE("grid target adjustment validates input") {
    CHECK_THROWS_AS(default_gabor_grid(2), ConfigError);  // too short for scales
    GaborGrid g;
    g.signal_length = 64;
    g.scales = {4.0};
    g.alphas = {1.0};
    g.frequency_counts = {1};
    g.phases = {0.0};
    CHECK_THROWS_AS(gabor_grid_for_target(g, 3), ConfigError);  // below one freq/scale
}

TEST_CASE("empty grid is a config error") {
    GaborGrid g;
    g.signal_length = 32;
    CHECK_THROWS_AS(build_gabor_dictionary(g), ConfigError);
}
