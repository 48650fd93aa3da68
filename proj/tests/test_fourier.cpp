#include <cmath>
#include <random>

#include "doctest.h"
#include "linescatter/fourier.hpp"
#include "linescatter/numerics.hpp"

using namespace linescatter;

namespace {

double uniform(std::mt19937& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

cdouble random_coupling(std::mt19937& rng, double scale) {
    return cdouble(uniform(rng, -scale, scale), uniform(rng, -scale, scale));
}

FourierLinePotential single_harmonic(double alpha, cdouble z0, cdouble zm, cdouble zp) {
    FourierLinePotential p;
    p.frequencies = {alpha};
    p.harmonics = {{-1, zm}, {0, z0}, {1, zp}};
    return p;
}

} // namespace

TEST_CASE("commensurate_base worked cases") {
    FourierLinePotential single;
    single.frequencies = {2.7};
    const CommensurateBase b1 = commensurate_base(single);
    CHECK(b1.base == doctest::Approx(2.7).epsilon(1e-14));
    REQUIRE(b1.multipliers.size() == 1);
    CHECK(b1.multipliers[0] == 1);

    FourierLinePotential comb_like;
    comb_like.frequencies = {2.0 * M_PI, 4.0 * M_PI, 6.0 * M_PI};
    const CommensurateBase b3 = commensurate_base(comb_like);
    CHECK(b3.base == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
    CHECK(b3.multipliers == std::vector<long long>{1, 2, 3});

    FourierLinePotential ratios;
    ratios.frequencies = {1.5, 2.5};
    const CommensurateBase br = commensurate_base(ratios);
    CHECK(br.base == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(br.multipliers == std::vector<long long>{3, 5});

    FourierLinePotential irrational;
    irrational.frequencies = {1.0, std::sqrt(2.0)};
    CHECK_THROWS_AS(commensurate_base(irrational), IncommensurateFrequencies);
}

TEST_CASE("enumerate_modes worked cases") {
    // Case 1: base above 2k leaves only the incident channel.
    const ModeSet case1 = enumerate_modes(3.0, IncidentWave{1.0, 0.5});
    CHECK(case1.shifts == std::vector<int>{0});

    const ModeSet three = enumerate_modes(0.9, IncidentWave{1.0, 0.0});
    CHECK(three.shifts == std::vector<int>{-1, 0, 1});
    CHECK(three.index_of(0) == 1);
    CHECK(three.index_of(5) == -1);
    for (size_t i = 0; i < three.shifts.size(); ++i) {
        CHECK(three.p[i] == doctest::Approx(three.shifts[i] * 0.9).epsilon(1e-14));
        CHECK(three.omega[i] > 0.0);
    }

    // Case 2.a: k < base <= 2k with |p0| < base - k keeps only shift 0.
    const ModeSet case2a = enumerate_modes(1.6, IncidentWave{1.0, std::asin(0.3)});
    CHECK(case2a.shifts == std::vector<int>{0});

    // p0 + 2*base lands exactly on k: grazing.
    CHECK_THROWS_AS(enumerate_modes(0.5, IncidentWave{1.0, 0.0}), GrazingMode);
}

TEST_CASE("mode_set_formula matches enumerate_modes across all cells") {
    const double k = 1.0;
    for (int j = 1; j <= 6; ++j) {
        const double base = 2.0 * k / (j + 0.5);
        for (int q = 0; q <= j; ++q) {
            const double a_lo = -k + q * base;
            const double a_hi = k - (j - q) * base;
            const double b_lo = a_hi;
            const double b_hi = -k + (q + 1) * base;
            // Cell interiors shrunk to dodge the grazing band at the edges.
            for (int variant = 0; variant < 2; ++variant) {
                const double lo = variant == 0 ? a_lo : b_lo;
                const double hi = variant == 0 ? a_hi : b_hi;
                if (!(hi > lo)) continue;
                const double margin = 1e-6 * (hi - lo) + 1e-9;
                for (int i = 0; i <= 100; ++i) {
                    const double p0 = lo + margin + (hi - lo - 2.0 * margin) * i / 100.0;
                    if (std::fabs(p0) >= k - 1e-8) continue;
                    const IncidentWave wave{k, std::asin(p0 / k)};
                    const ModeSet by_formula = mode_set_formula(j, q, base, wave);
                    const ModeSet by_scan = enumerate_modes(base, wave);
                    CHECK(by_formula.shifts == by_scan.shifts);
                    CHECK((static_cast<int>(by_scan.shifts.size()) == j ||
                           static_cast<int>(by_scan.shifts.size()) == j + 1));
                }
            }
        }
    }

    CHECK_THROWS_AS(mode_set_formula(1, 0, 3.0, IncidentWave{1.0, 0.0}), OutOfCell);
    CHECK_THROWS_AS(mode_set_formula(1, 2, 1.5, IncidentWave{1.0, 0.0}), OutOfCell);
}

TEST_CASE("build_mode_system pinned entries") {
    FourierLinePotential flat;
    flat.harmonics = {{0, cdouble(0.7, -0.2)}};
    const IncidentWave wave{1.0, 0.4};
    const ModeSet one = enumerate_modes(3.0, wave);
    const ModeSystem sys = build_mode_system(flat, CommensurateBase{3.0, {}}, one, wave);
    REQUIRE(sys.matrix.rows == 1);
    CHECK(std::abs(sys.matrix.at(0, 0) -
                   (1.0 + cdouble(0.0, 1.0) * cdouble(0.7, -0.2) / (2.0 * wave.omega0()))) <
          1e-15);
    CHECK(std::abs(sys.rhs[0] - 2.0 * M_PI) < 1e-15);

    // Case 2.b two-channel matrix, literal entries.
    const cdouble z0(0.3, 0.1), zm(-0.2, 0.4), zp(0.5, 0.0);
    const double alpha = 1.5;
    const IncidentWave w2{1.0, std::asin(0.7)};
    const FourierLinePotential pot = single_harmonic(alpha, z0, zm, zp);
    const CommensurateBase base = commensurate_base(pot);
    const ModeSet modes = enumerate_modes(base.base, w2);
    REQUIRE(modes.shifts == std::vector<int>{-1, 0});
    const ModeSystem two = build_mode_system(pot, base, modes, w2);
    const double wm = modes.omega[0], w0 = modes.omega[1];
    const cdouble i1(0.0, 1.0);
    CHECK(std::abs(two.matrix.at(0, 0) - (1.0 + i1 * z0 / (2.0 * wm))) < 1e-14);
    CHECK(std::abs(two.matrix.at(0, 1) - i1 * zm / (2.0 * wm)) < 1e-14);
    CHECK(std::abs(two.matrix.at(1, 0) - i1 * zp / (2.0 * w0)) < 1e-14);
    CHECK(std::abs(two.matrix.at(1, 1) - (1.0 + i1 * z0 / (2.0 * w0))) < 1e-14);
    CHECK(std::abs(two.rhs[0]) == 0.0);
    CHECK(std::abs(two.rhs[1] - 2.0 * M_PI) < 1e-15);

    // Zero couplings give the identity.
    FourierLinePotential empty;
    empty.frequencies = {1.5};
    const ModeSystem id = build_mode_system(empty, base, modes, w2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(id.matrix.at(i, j) - (i == j ? 1.0 : 0.0)) == 0.0);
}

TEST_CASE("case 1 beam matches the single-channel closed form") {
    std::mt19937 rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        const cdouble z0 = random_coupling(rng, 1.5);
        const double k = uniform(rng, 0.3, 2.0);
        const double alpha = uniform(rng, 2.1 * k, 4.0 * k);
        const double theta0 = uniform(rng, -1.3, 1.3);
        FourierLinePotential pot;
        pot.frequencies = {alpha};
        pot.harmonics = {{0, z0}, {1, random_coupling(rng, 1.5)},
                         {-1, random_coupling(rng, 1.5)}};
        const IncidentWave wave{k, theta0};
        DiscreteAmplitude amp;
        try {
            amp = solve_beams(pot, wave);
        } catch (const SpectralSingularity&) {
            continue;
        }
        REQUIRE(amp.beams.size() == 1);
        const double w0 = wave.omega0();
        const cdouble expect = -2.0 * M_PI * cdouble(0.0, 1.0) * z0 /
                               (2.0 * w0 + cdouble(0.0, 1.0) * z0);
        CHECK(std::abs(amp.beams[0].y - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
        CHECK(amp.beams[0].theta == doctest::Approx(theta0).epsilon(1e-13));
    }
}

TEST_CASE("invisibility below half the base frequency") {
    FourierLinePotential pot;
    pot.frequencies = {3.0};
    pot.harmonics = {{0, 0.0}, {1, cdouble(1.0, 2.0)}, {-1, cdouble(-0.5, 0.3)}};
    const DiscreteAmplitude amp = solve_beams(pot, IncidentWave{1.2, 0.7});
    for (const Beam& b : amp.beams) CHECK(std::abs(b.y) < 1e-12);

    // Case 2.b with z0 = z_- = 0 is invisible even with two open channels.
    const FourierLinePotential pot2 = single_harmonic(1.5, 0.0, 0.0, cdouble(1.0, 1.0));
    const DiscreteAmplitude amp2 = solve_beams(pot2, IncidentWave{1.0, std::asin(0.7)});
    REQUIRE(amp2.beams.size() == 2);
    for (const Beam& b : amp2.beams) CHECK(std::abs(b.y) < 1e-12);
}

TEST_CASE("case 2 closed forms against the matrix pipeline") {
    std::mt19937 rng(83);
    int done = 0;
    while (done < 100) {
        const double k = uniform(rng, 0.5, 2.0);
        const double alpha = uniform(rng, 1.05 * k, 1.9 * k);
        const bool mirror = done % 2 == 1;
        const double smin = (alpha - k) / k + 0.05;
        if (smin >= 0.93) continue;
        double s0 = uniform(rng, smin, 0.93);
        if (mirror) s0 = -s0;
        const IncidentWave wave{k, std::asin(s0)};
        const FourierLinePotential pot = single_harmonic(
            alpha, random_coupling(rng, 1.0), random_coupling(rng, 1.0),
            random_coupling(rng, 1.0));
        DiscreteAmplitude direct, closed;
        cdouble det_closed;
        try {
            direct = solve_beams(pot, wave);
            closed = case2_amplitude(pot, wave);
            det_closed = case2_determinant(pot, wave);
        } catch (const ScatterError&) {
            continue;
        }
        const CommensurateBase base = commensurate_base(pot);
        const ModeSet modes = enumerate_modes(base.base, wave);
        REQUIRE(modes.shifts.size() == 2);
        const ModeSystem sys = build_mode_system(pot, base, modes, wave);
        const cdouble det_matrix = determinant(sys.matrix).value();
        CHECK(std::abs(det_closed - det_matrix) <= 1e-12 * std::max(1.0, std::abs(det_matrix)));

        REQUIRE(direct.beams.size() == 2);
        REQUIRE(closed.beams.size() == 2);
        for (size_t i = 0; i < 2; ++i) {
            CHECK(direct.beams[i].shift == closed.beams[i].shift);
            CHECK(std::abs(direct.beams[i].y - closed.beams[i].y) <=
                  1e-12 * std::max(1.0, std::abs(direct.beams[i].y)));
        }
        ++done;
    }

    CHECK_THROWS_AS(
        case2_determinant(single_harmonic(3.0, 1.0, 1.0, 1.0), IncidentWave{1.0, 0.0}),
        OutOfRegime);
    CHECK_THROWS_AS(
        case2_determinant(single_harmonic(1.6, 1.0, 1.0, 1.0), IncidentWave{1.0, 0.0}),
        OutOfRegime);
}

TEST_CASE("case 2 determinant trivial value") {
    const FourierLinePotential pot = single_harmonic(1.5, 0.0, 0.0, 0.0);
    const cdouble det = case2_determinant(pot, IncidentWave{1.0, std::asin(0.7)});
    CHECK(std::abs(det - 1.0) < 1e-15);
}

TEST_CASE("directional laser condition") {
    const auto hit = directional_laser_condition(cdouble(0.0, 1.0), 4.0);
    REQUIRE(hit.has_value());
    const auto [k, theta0] = *hit;
    CHECK(k >= 0.5);
    CHECK(k < 2.0);
    CHECK(std::abs(2.0 * k * std::cos(theta0) + cdouble(0.0, 1.0) * cdouble(0.0, 1.0)) <
          1e-12);

    CHECK(!directional_laser_condition(cdouble(1.0, 0.0), 4.0).has_value());
    CHECK(!directional_laser_condition(cdouble(0.0, 3.0), 2.0).has_value());
    CHECK(!directional_laser_condition(cdouble(0.0, -1.0), 4.0).has_value());
}

TEST_CASE("comb beams: truncation theorem") {
    std::mt19937 rng(91);
    int done = 0;
    while (done < 20) {
        const double a = uniform(rng, 0.5, 2.0);
        const double k = uniform(rng, 1.05, 1.9) * M_PI / a; // a < lambda <= 2a
        const double theta0 = uniform(rng, -0.4, 0.4);
        const PeriodicComb comb{random_coupling(rng, 1.0), a};
        const IncidentWave wave{k, theta0};
        DiscreteAmplitude from_comb, from_cosine, extended;
        try {
            from_comb = comb_beams(comb, wave);
            from_cosine = solve_beams(comb_to_fourier(comb, 1), wave);
            extended = comb_beams(comb, wave, required_truncation(comb, wave) + 5);
        } catch (const ScatterError&) {
            continue;
        }
        REQUIRE(from_comb.beams.size() == from_cosine.beams.size());
        for (size_t i = 0; i < from_comb.beams.size(); ++i) {
            CHECK(from_comb.beams[i].shift == from_cosine.beams[i].shift);
            CHECK(std::abs(from_comb.beams[i].y - from_cosine.beams[i].y) <= 1e-12);
        }
        REQUIRE(extended.beams.size() == from_comb.beams.size());
        for (size_t i = 0; i < from_comb.beams.size(); ++i)
            CHECK(std::abs(extended.beams[i].y - from_comb.beams[i].y) < 1e-15);
        ++done;
    }

    // lambda > 2a: a single channel governed by z/a alone.
    const PeriodicComb comb{cdouble(0.8, -0.3), 1.0};
    const IncidentWave wave{2.0, 0.2}; // k = 2 < pi
    const DiscreteAmplitude beams = comb_beams(comb, wave);
    REQUIRE(beams.beams.size() == 1);
    const cdouble z0 = comb.coupling / comb.spacing;
    const cdouble expect =
        -2.0 * M_PI * cdouble(0.0, 1.0) * z0 / (2.0 * wave.omega0() + cdouble(0.0, 1.0) * z0);
    CHECK(std::abs(beams.beams[0].y - expect) < 1e-12);
    const DiscreteAmplitude zeroth = solve_beams(comb_to_fourier(comb, 0), wave);
    CHECK(std::abs(beams.beams[0].y - zeroth.beams[0].y) < 1e-14);
}
