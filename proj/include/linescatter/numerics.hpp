#pragma once

#include <complex>
#include <vector>

#include "linescatter/errors.hpp"

namespace linescatter {

using cdouble = std::complex<double>;

// Bessel function of the first kind, order zero.
// Absolute error <= 1e-13 for |x| <= 50; exactly even in x.
double bessel_j0(double x);

// Dense row-major complex matrix. Sized once, immutable in solver use.
struct ComplexMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<cdouble> entries;

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c) : rows(r), cols(c), entries(static_cast<size_t>(r) * c) {}

    cdouble& at(int i, int j) { return entries[static_cast<size_t>(i) * cols + j]; }
    const cdouble& at(int i, int j) const { return entries[static_cast<size_t>(i) * cols + j]; }
};

struct SolveReport {
    std::vector<cdouble> solution;
    double condition_estimate = 0.0; // 1-norm based
    double residual_norm = 0.0;      // ||A x - b||_inf, computed post-hoc
};

// Gaussian elimination with partial pivoting. Throws SingularMatrix when a
// pivot magnitude falls below 1e-14 times the largest initial entry; in solver
// contexts that signals a spectral singularity.
SolveReport solve_dense(const ComplexMatrix& A, const std::vector<cdouble>& b);

// Determinant kept as mantissa * 2^exponent so long pivot products cannot
// overflow or underflow. |mantissa| is in [0.5, 1) unless the value is 0.
struct ScaledComplex {
    cdouble mantissa{0.0, 0.0};
    int exponent = 0;

    cdouble value() const { return mantissa * std::ldexp(1.0, exponent); }
    double abs() const { return std::ldexp(std::abs(mantissa), exponent); }
};

ScaledComplex determinant(const ComplexMatrix& A);

// Self-test of the band identity int_{-k}^{k} e^{iap}/omega(p) dp = pi J0(ak):
// integrates the cosine part with the substitution p = k sin(u) (which removes
// the endpoint singularity) and returns |quadrature - pi*J0(ak)|.
double band_integral_check(double aval, double k);

} // namespace linescatter
