#include "linescatter/foldy.hpp"

#include <algorithm>
#include <cmath>

namespace linescatter {

namespace {

const cdouble kImag(0.0, 1.0);

cdouble cis(double phase) { return cdouble(std::cos(phase), std::sin(phase)); }

} // namespace

cdouble SmoothAmplitude::at_sin(double sin_theta) const {
    cdouble sum = 0.0;
    for (const auto& [c, a] : coefficients) sum += c * cis(-a * k * sin_theta);
    return -sum / (2.0 * std::sqrt(2.0 * M_PI));
}

FoldySystem build_system(const DeltaLineArray& array, const IncidentWave& wave) {
    validate(array);
    validate(wave);
    const int n = static_cast<int>(array.couplings.size());
    FoldySystem sys;
    sys.k = wave.k;
    sys.p0 = wave.p0();
    sys.matrix = ComplexMatrix(n, n);
    sys.rhs.resize(n);
    for (int m = 0; m < n; ++m) {
        for (int j = 0; j < n; ++j) {
            const double j0 = bessel_j0(wave.k * (array.positions[m] - array.positions[j]));
            sys.matrix.at(m, j) = (m == j ? 1.0 : 0.0) + (kImag / 4.0) * array.couplings[j] * j0;
        }
        sys.rhs[m] = cis(array.positions[m] * sys.p0);
    }
    return sys;
}

SmoothAmplitude solve_amplitude(const DeltaLineArray& array, const IncidentWave& wave) {
    const FoldySystem sys = build_system(array, wave);
    SolveReport rep;
    try {
        rep = solve_dense(sys.matrix, sys.rhs);
    } catch (const SingularMatrix&) {
        throw SpectralSingularity(wave.k, "Foldy matrix singular: spectral singularity");
    }
    SmoothAmplitude amp;
    amp.k = wave.k;
    amp.theta0 = wave.theta0;
    for (size_t n = 0; n < array.couplings.size(); ++n)
        amp.coefficients.emplace_back(array.couplings[n] * rep.solution[n], array.positions[n]);
    return amp;
}

SmoothAmplitude closed_form_single(cdouble z, double a1, const IncidentWave& wave) {
    validate(wave);
    const cdouble denom = 4.0 + kImag * z;
    if (std::abs(denom) < 1e-14 * (4.0 + std::abs(z)))
        throw SpectralSingularity(wave.k, "single delta: 4 + i z vanishes");
    SmoothAmplitude amp;
    amp.k = wave.k;
    amp.theta0 = wave.theta0;
    // z * x with x = 4 exp(i a1 p0) / (4 + i z)
    amp.coefficients.emplace_back(4.0 * z * cis(a1 * wave.p0()) / denom, a1);
    return amp;
}

SmoothAmplitude closed_form_double(cdouble z1, cdouble z2, double a1, double a2,
                                   const IncidentWave& wave) {
    validate(wave);
    const double j0 = bessel_j0(wave.k * (a1 - a2));
    // det A = 1 + (i/4)(z1 + z2) + (1/16) z1 z2 (J0^2 - 1)
    const cdouble det = 1.0 + (kImag / 4.0) * (z1 + z2) + (z1 * z2 / 16.0) * (j0 * j0 - 1.0);
    const double scale = 1.0 + (std::abs(z1) + std::abs(z2)) / 4.0 + std::abs(z1 * z2) / 16.0;
    if (std::abs(det) < 1e-14 * scale)
        throw SpectralSingularity(wave.k, "double delta: det A vanishes");

    const double p0 = wave.p0();
    const cdouble b1 = cis(a1 * p0);
    const cdouble b2 = cis(a2 * p0);
    // x = A^{-1} b with A = (1/4) [[4 + i z1, i z2 J0], [i z1 J0, 4 + i z2]]
    const cdouble x1 = ((4.0 + kImag * z2) * b1 - kImag * z2 * j0 * b2) / (4.0 * det);
    const cdouble x2 = ((4.0 + kImag * z1) * b2 - kImag * z1 * j0 * b1) / (4.0 * det);

    SmoothAmplitude amp;
    amp.k = wave.k;
    amp.theta0 = wave.theta0;
    amp.coefficients.emplace_back(z1 * x1, a1);
    amp.coefficients.emplace_back(z2 * x2, a2);
    return amp;
}

SymmetricPairDecomposition symmetric_pair_decomposition(cdouble z, double separation,
                                                        double k) {
    const double j0 = bessel_j0(separation * k);
    SymmetricPairDecomposition d;
    d.delta = (1.0 - j0 * j0) * z * z - 8.0 * kImag * z - 16.0;
    const double root2pi = std::sqrt(2.0 * M_PI);
    d.f_minus = 4.0 * z * (4.0 + kImag * z) / (root2pi * d.delta);
    d.f_plus = -4.0 * kImag * z * z * j0 / (root2pi * d.delta);
    return d;
}

std::pair<cdouble, cdouble> double_delta_singular_couplings(double separation, double k) {
    if (!(k > 0.0)) throw InvalidPotential("k: must be positive");
    if (std::fabs(separation * k) < 1e-12)
        throw DegenerateSeparation("double delta: ak too close to 0, J0(ak)^2 = 1");
    const double j0 = bessel_j0(separation * k);
    const double denom = 1.0 - j0 * j0;
    // Roots of Delta(z, k) = (1 - J0^2) z^2 - 8 i z - 16: the discriminant is
    // -64 J0^2, so z = 4i (1 +- J0) / (1 - J0^2). Both are purely imaginary
    // and collapse to the decoupled single-delta value 4i at the zeros of J0.
    return {4.0 * kImag * (1.0 + j0) / denom, 4.0 * kImag * (1.0 - j0) / denom};
}

DeterminantScan determinant_scan(const DeltaLineArray& array,
                                 const std::vector<double>& k_grid,
                                 double rel_threshold) {
    validate(array);
    for (size_t i = 0; i < k_grid.size(); ++i) {
        if (!(k_grid[i] > 0.0)) throw InvalidConfig("k grid: entries must be positive");
        if (i > 0 && !(k_grid[i] > k_grid[i - 1]))
            throw InvalidConfig("k grid: must be strictly increasing");
    }

    DeterminantScan scan;
    const int n = static_cast<int>(array.couplings.size());
    for (double k : k_grid) {
        ComplexMatrix A(n, n);
        for (int m = 0; m < n; ++m)
            for (int j = 0; j < n; ++j) {
                const double j0 = bessel_j0(k * (array.positions[m] - array.positions[j]));
                A.at(m, j) =
                    (m == j ? 1.0 : 0.0) + cdouble(0.0, 0.25) * array.couplings[j] * j0;
            }
        scan.samples.push_back({k, determinant(A)});
    }

    std::vector<double> mags;
    mags.reserve(scan.samples.size());
    for (const auto& s : scan.samples) mags.push_back(s.det.abs());
    std::vector<double> sorted = mags;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];
    const double thr = rel_threshold * (median > 0.0 ? median : 1.0);

    for (size_t i = 0; i < mags.size(); ++i) {
        if (mags[i] > thr) continue;
        double k_refined = k_grid[i];
        if (i > 0 && i + 1 < mags.size() && mags[i] < mags[i - 1] && mags[i] < mags[i + 1]) {
            // |det| is smooth in k through J0; refine a strict minimum with the
            // parabola through the three neighboring samples.
            const double y0 = mags[i - 1], y1 = mags[i], y2 = mags[i + 1];
            const double denom = y0 - 2.0 * y1 + y2;
            if (denom > 0.0) {
                const double h_lo = k_grid[i] - k_grid[i - 1];
                const double shift = 0.5 * (y0 - y2) / denom;
                k_refined = k_grid[i] + shift * h_lo;
            }
        }
        scan.candidates.push_back({k_refined, mags[i]});
    }
    return scan;
}

double field_fixed_point_check(const DeltaLineArray& array, const IncidentWave& wave) {
    const FoldySystem sys = build_system(array, wave);
    const SolveReport rep = solve_dense(sys.matrix, sys.rhs);
    const int n = static_cast<int>(array.couplings.size());
    double worst = 0.0;
    for (int m = 0; m < n; ++m) {
        cdouble field = cis(wave.p0() * array.positions[m]);
        for (int j = 0; j < n; ++j) {
            const double j0 = bessel_j0(wave.k * (array.positions[m] - array.positions[j]));
            field -= (kImag / 4.0) * array.couplings[j] * rep.solution[j] * j0;
        }
        worst = std::max(worst, std::abs(field - rep.solution[m]));
    }
    return worst;
}

} // namespace linescatter
