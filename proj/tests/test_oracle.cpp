#include <cmath>
#include <random>

#include "doctest.h"
#include "linescatter/oracle.hpp"

using namespace linescatter;

namespace {

double uniform(std::mt19937& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double max_diff(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("born series: zero couplings converge immediately to the incident field") {
    const DeltaLineArray arr{{0.0, 0.0}, {0.0, 1.0}};
    const IncidentWave wave{1.0, 0.3};
    const BornSeriesResult res = born_series_foldy(arr, wave, 50, 1e-12);
    CHECK(res.converged);
    const FoldySystem sys = build_system(arr, wave);
    CHECK(max_diff(res.partial_sums.back(), sys.rhs) == 0.0);
    CHECK(res.estimated_ratio == 0.0);
}

TEST_CASE("born series: single weak delta reproduces the geometric series") {
    const cdouble z(0.1, 0.0);
    const IncidentWave wave{1.0, 0.0};
    const BornSeriesResult res = born_series_foldy({{z}, {0.0}}, wave, 100, 1e-14);
    CHECK(res.converged);
    CHECK(res.terms_used < 25);
    // Limit of the scalar series: x = 1 / (1 + i z / 4).
    const cdouble expect = 1.0 / (1.0 + cdouble(0.0, 1.0) * z / 4.0);
    CHECK(std::abs(res.partial_sums.back()[0] - expect) < 1e-12);
    CHECK(res.estimated_ratio == doctest::Approx(std::abs(z) / 4.0).epsilon(1e-6));
}

TEST_CASE("born series: strong coupling is reported as non-convergent") {
    const DeltaLineArray arr{{cdouble(10.0, 0.0), cdouble(0.0, 10.0)}, {0.0, 0.5}};
    const BornSeriesResult res = born_series_foldy(arr, IncidentWave{1.0, 0.2}, 60, 1e-12);
    CHECK(!res.converged);
    CHECK(res.estimated_ratio >= 1.0);
}

TEST_CASE("born series agrees with the direct solve when contractive") {
    std::mt19937 rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        DeltaLineArray arr;
        const int n = 2 + trial % 7; // up to 8 scatterers
        for (int i = 0; i < n; ++i) {
            arr.couplings.push_back(cdouble(uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0)));
            arr.positions.push_back(uniform(rng, -2.0, 2.0));
        }
        const IncidentWave wave{uniform(rng, 0.3, 2.0), uniform(rng, -1.0, 1.0)};
        // Scale the couplings until the iteration is safely contractive.
        FoldySystem sys = build_system(arr, wave);
        while (contraction_estimate(sys.matrix) >= 0.5) {
            for (cdouble& z : arr.couplings) z *= 0.6;
            sys = build_system(arr, wave);
        }
        const BornSeriesResult res = born_series_foldy(arr, wave, 200, 1e-12);
        CHECK(res.converged);
        const std::vector<cdouble> direct = solve_dense(sys.matrix, sys.rhs).solution;
        CHECK(max_diff(res.partial_sums.back(), direct) < 1e-8);
        CHECK(residual_verify(sys, res.partial_sums.back()) < 1e-8);
    }
}

TEST_CASE("born series for mode systems") {
    FourierLinePotential weak;
    weak.harmonics = {{0, cdouble(0.05, 0.0)}};
    const IncidentWave wave{1.0, 0.0};
    const BornSeriesResult res = born_series_modes(weak, wave, 100, 1e-13);
    CHECK(res.converged);
    // Matches the single-channel coefficient x0 = 2 pi / (1 + i z0 / (2 omega0)).
    const cdouble expect =
        2.0 * M_PI / (1.0 + cdouble(0.0, 1.0) * cdouble(0.05, 0.0) / (2.0 * wave.omega0()));
    CHECK(std::abs(res.partial_sums.back()[0] - expect) < 1e-10);

    // Multi-channel potential, moderate coupling.
    FourierLinePotential pot;
    pot.frequencies = {0.9};
    pot.harmonics = {{-1, cdouble(0.1, 0.05)}, {0, cdouble(0.2, 0.0)}, {1, cdouble(0.0, 0.1)}};
    const BornSeriesResult multi = born_series_modes(pot, wave, 200, 1e-12);
    CHECK(multi.converged);
    const CommensurateBase base = commensurate_base(pot);
    const ModeSystem sys = build_mode_system(pot, base, enumerate_modes(base.base, wave), wave);
    const std::vector<cdouble> direct = solve_dense(sys.matrix, sys.rhs).solution;
    CHECK(max_diff(multi.partial_sums.back(), direct) < 1e-8);

    // Strong coupling near the single-channel singularity diverges.
    FourierLinePotential strong;
    strong.harmonics = {{0, cdouble(0.0, -1.9)}};
    const BornSeriesResult bad = born_series_modes(strong, IncidentWave{1.0, 0.0}, 60, 1e-12);
    CHECK(!bad.converged);
    CHECK(bad.estimated_ratio >= 0.9);
}

TEST_CASE("convergence is monotone in the coupling scale") {
    const DeltaLineArray arr{{cdouble(1.2, -0.7), cdouble(-0.4, 0.9)}, {0.0, 1.1}};
    const IncidentWave wave{1.0, 0.1};
    const double full = contraction_estimate(build_system(arr, wave).matrix);
    for (double t : {0.75, 0.5, 0.25}) {
        DeltaLineArray scaled = arr;
        for (cdouble& z : scaled.couplings) z *= t;
        const double r = contraction_estimate(build_system(scaled, wave).matrix);
        CHECK(r <= full * t * 1.001 + 1e-12);
        if (full < 1.0) {
            const BornSeriesResult res = born_series_foldy(scaled, wave, 300, 1e-12);
            CHECK(res.converged);
        }
    }
}

TEST_CASE("residual_verify") {
    const DeltaLineArray arr{{cdouble(0.7, 0.2), cdouble(-0.3, 0.5)}, {0.0, 0.9}};
    const IncidentWave wave{1.4, -0.2};
    const FoldySystem sys = build_system(arr, wave);
    const SolveReport rep = solve_dense(sys.matrix, sys.rhs);
    CHECK(residual_verify(sys, rep.solution) < 1e-12);

    std::vector<cdouble> perturbed = rep.solution;
    perturbed[0] += 0.1;
    CHECK(residual_verify(sys, perturbed) > 0.1 / rep.condition_estimate);

    ComplexMatrix a(2, 2);
    a.at(0, 0) = 1.0;
    a.at(1, 1) = 1.0;
    CHECK(residual_verify(a, {0.0, 0.0}, {0.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(residual_verify(a, {0.0, 0.0}, {0.0}), InvalidConfig);
}
