#pragma once

#include <utility>
#include <vector>

#include "linescatter/potential.hpp"

namespace linescatter {

// Foldy multiple-scattering system for a finite delta array:
//   A_mn = delta_mn + (i/4) z_n J0(k (a_m - a_n)),   b_m = exp(i a_m p0).
// The matrix never depends on p0; only the right-hand side does.
struct FoldySystem {
    ComplexMatrix matrix;
    std::vector<cdouble> rhs;
    double k = 0.0;
    double p0 = 0.0;
};

// f(theta) = -1/(2 sqrt(2 pi)) sum_n c_n exp(-i a_n k sin(theta)) with
// c_n = z_n x_n. Depends on theta only through sin(theta), hence
// f(theta) = f(pi - theta) identically.
struct SmoothAmplitude {
    double k = 0.0;
    double theta0 = 0.0;
    std::vector<std::pair<cdouble, double>> coefficients; // (z_n * x_n, a_n)

    cdouble at_sin(double sin_theta) const;
    cdouble operator()(double theta) const { return at_sin(std::sin(theta)); }
};

FoldySystem build_system(const DeltaLineArray& array, const IncidentWave& wave);

// Solves the Foldy system and packages the amplitude. Throws
// SpectralSingularity (carrying k) when the matrix is singular.
SmoothAmplitude solve_amplitude(const DeltaLineArray& array, const IncidentWave& wave);

// N = 1 closed form: f = -sqrt(2/pi) z exp(-i a1 k (sin t - sin t0)) / (4 + i z).
SmoothAmplitude closed_form_single(cdouble z, double a1, const IncidentWave& wave);

// N = 2 closed form evaluated without a linear solve.
SmoothAmplitude closed_form_double(cdouble z1, cdouble z2, double a1, double a2,
                                   const IncidentWave& wave);

// Symmetric pair z1 = z2 = z at y = +-a/2:
//   f(theta) = f_minus cos[ak/2 (sin t - sin t0)] + f_plus cos[ak/2 (sin t + sin t0)],
// with Delta(z, k) the singularity denominator.
struct SymmetricPairDecomposition {
    cdouble f_minus;
    cdouble f_plus;
    cdouble delta; // [1 - J0(ak)^2] z^2 - 8 i z - 16
};

SymmetricPairDecomposition symmetric_pair_decomposition(cdouble z, double separation,
                                                        double k);

// Both roots of Delta(z, k) = 0 for a symmetric pair with separation a:
//   z = 4 i (1 +- J0(ak)) / (1 - J0(ak)^2).
// Purely imaginary for every ak > 0.
std::pair<cdouble, cdouble> double_delta_singular_couplings(double separation, double k);

struct DeterminantSample {
    double k = 0.0;
    ScaledComplex det;
};

struct SingularityCandidate {
    double k = 0.0;       // refined location (parabolic through neighbors)
    double abs_det = 0.0; // |det| at the sampled grid point
};

struct DeterminantScan {
    std::vector<DeterminantSample> samples;
    std::vector<SingularityCandidate> candidates;
};

// |det A| over a strictly increasing k grid; grid points whose |det| falls
// below rel_threshold times the grid median are reported as singularity
// candidates, with local minima refined by three-point parabolic
// interpolation.
DeterminantScan determinant_scan(const DeltaLineArray& array,
                                 const std::vector<double>& k_grid,
                                 double rel_threshold = 1e-8);

// Evaluates the scattered field at each scatterer position and returns
// max_m |A_+(a_m) - x_m|; contract: <= 1e-10 * max_m |x_m|.
double field_fixed_point_check(const DeltaLineArray& array, const IncidentWave& wave);

} // namespace linescatter
