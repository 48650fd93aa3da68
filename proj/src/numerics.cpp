#include "linescatter/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace linescatter {

namespace {

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// Ascending power series sum (-1)^m (x^2/4)^m / (m!)^2 with compensated
// accumulation in long double. Cancellation grows with x, so this is only
// used up to |x| = 16; beyond that the Hankel expansion is more accurate.
long double j0_series(long double ax) {
    const long double q = ax * ax / 4.0L;
    long double term = 1.0L;
    long double sum = 1.0L;
    long double comp = 0.0L;
    for (int m = 1; m < 400; ++m) {
        term *= -q / (static_cast<long double>(m) * m);
        const long double y = term - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (fabsl(term) < 1e-20L) break;
    }
    return sum;
}

// Hankel asymptotic amplitude/phase expansion,
//   J0(x) = sqrt(2/(pi x)) [P(x) cos(x - pi/4) - Q(x) sin(x - pi/4)],
// with coefficients c_{m+1} = c_m (2m+1)^2 / (8(m+1)); the series is summed
// to its smallest term.
long double j0_asymptotic(long double ax) {
    const long double z = 1.0L / ax;
    long double c = 1.0L; // c_m z^m
    long double p = 1.0L;
    long double qsum = 0.0L;
    long double prev = 1.0L;
    for (int m = 0; m < 60; ++m) {
        c *= static_cast<long double>(2 * m + 1) * (2 * m + 1) * z / (8.0L * (m + 1));
        if (fabsl(c) > prev) break; // divergence onset
        prev = fabsl(c);
        const int mm = m + 1;
        const long double signed_term = ((mm / 2) % 2 == 0 ? c : -c);
        if (mm % 2 == 0) {
            p += signed_term;
        } else {
            qsum += signed_term;
        }
        if (fabsl(c) < 1e-21L) break;
    }
    // qsum accumulates -Q, whose leading term is -1/(8x).
    const long double chi = ax - kPiL / 4.0L;
    return sqrtl(2.0L / (kPiL * ax)) * (p * cosl(chi) + qsum * sinl(chi));
}

struct LuFactors {
    ComplexMatrix lu;          // L below diagonal (unit), U on and above
    std::vector<int> perm;     // row permutation
    int sign = 1;
    double max_initial = 0.0;  // largest |entry| of the input matrix
    bool below_threshold = false;
    bool exactly_singular = false;
};

LuFactors lu_factorize(const ComplexMatrix& A) {
    const int n = A.rows;
    LuFactors f;
    f.lu = A;
    f.perm.resize(n);
    std::iota(f.perm.begin(), f.perm.end(), 0);
    for (const cdouble& e : A.entries) f.max_initial = std::max(f.max_initial, std::abs(e));

    const double threshold = 1e-14 * f.max_initial;
    for (int j = 0; j < n; ++j) {
        int piv = j;
        double best = std::abs(f.lu.at(j, j));
        for (int i = j + 1; i < n; ++i) {
            const double a = std::abs(f.lu.at(i, j));
            if (a > best) {
                best = a;
                piv = i;
            }
        }
        if (piv != j) {
            for (int c = 0; c < n; ++c) std::swap(f.lu.at(j, c), f.lu.at(piv, c));
            std::swap(f.perm[j], f.perm[piv]);
            f.sign = -f.sign;
        }
        if (best <= threshold) f.below_threshold = true;
        if (best == 0.0) {
            f.exactly_singular = true;
            return f; // determinant is exactly zero; nothing left to eliminate
        }
        const cdouble pivot = f.lu.at(j, j);
        for (int i = j + 1; i < n; ++i) {
            const cdouble m = f.lu.at(i, j) / pivot;
            f.lu.at(i, j) = m;
            for (int c = j + 1; c < n; ++c) f.lu.at(i, c) -= m * f.lu.at(j, c);
        }
    }
    return f;
}

std::vector<cdouble> lu_solve(const LuFactors& f, const std::vector<cdouble>& b) {
    const int n = f.lu.rows;
    std::vector<cdouble> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= f.lu.at(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= f.lu.at(i, j) * x[j];
        x[i] /= f.lu.at(i, i);
    }
    return x;
}

double norm_inf(const std::vector<cdouble>& v) {
    double m = 0.0;
    for (const cdouble& e : v) m = std::max(m, std::abs(e));
    return m;
}

double matrix_norm1(const ComplexMatrix& A) {
    double best = 0.0;
    for (int j = 0; j < A.cols; ++j) {
        double s = 0.0;
        for (int i = 0; i < A.rows; ++i) s += std::abs(A.at(i, j));
        best = std::max(best, s);
    }
    return best;
}

} // namespace

double bessel_j0(double x) {
    if (!std::isfinite(x)) throw NonFinite("bessel_j0: argument is not finite");
    const long double ax = fabsl(static_cast<long double>(x));
    if (ax == 0.0L) return 1.0;
    if (ax <= 16.0L) return static_cast<double>(j0_series(ax));
    return static_cast<double>(j0_asymptotic(ax));
}

SolveReport solve_dense(const ComplexMatrix& A, const std::vector<cdouble>& b) {
    if (A.rows != A.cols) throw InvalidConfig("solve_dense: matrix must be square");
    if (static_cast<int>(b.size()) != A.rows)
        throw InvalidConfig("solve_dense: right-hand side size mismatch");

    const int n = A.rows;
    const LuFactors f = lu_factorize(A);
    if (f.below_threshold || f.exactly_singular)
        throw SingularMatrix("solve_dense: pivot below 1e-14 of the largest entry");

    SolveReport rep;
    rep.solution = lu_solve(f, b);

    std::vector<cdouble> r(n);
    for (int i = 0; i < n; ++i) {
        cdouble s = 0.0;
        for (int j = 0; j < n; ++j) s += A.at(i, j) * rep.solution[j];
        r[i] = s - b[i];
    }
    rep.residual_norm = norm_inf(r);

    // ||A^{-1}||_1 computed column by column; systems here are small.
    double inv_norm = 0.0;
    std::vector<cdouble> e(n, 0.0);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        const std::vector<cdouble> col = lu_solve(f, e);
        double s = 0.0;
        for (const cdouble& v : col) s += std::abs(v);
        inv_norm = std::max(inv_norm, s);
        e[j] = 0.0;
    }
    rep.condition_estimate = std::max(matrix_norm1(A) * inv_norm, 1.0);
    return rep;
}

ScaledComplex determinant(const ComplexMatrix& A) {
    if (A.rows != A.cols) throw InvalidConfig("determinant: matrix must be square");
    const LuFactors f = lu_factorize(A);
    if (f.exactly_singular) return ScaledComplex{};

    ScaledComplex det;
    det.mantissa = cdouble(static_cast<double>(f.sign), 0.0);
    for (int j = 0; j < A.rows; ++j) {
        det.mantissa *= f.lu.at(j, j);
        const double m = std::abs(det.mantissa);
        if (m == 0.0) return ScaledComplex{};
        int e = 0;
        std::frexp(m, &e);
        det.mantissa *= std::ldexp(1.0, -e);
        det.exponent += e;
    }
    return det;
}

double band_integral_check(double aval, double k) {
    if (!(k > 0.0)) throw InvalidConfig("band_integral_check: k must be positive");
    // int_{-k}^{k} cos(a p)/sqrt(k^2-p^2) dp  =  int_{-pi/2}^{pi/2} cos(a k sin u) du
    const double c = aval * k;
    const int n = 50000; // composite Simpson, even interval count
    const double h = M_PI / n;
    auto f = [c](double u) { return std::cos(c * std::sin(u)); };
    double sum = f(-M_PI / 2) + f(M_PI / 2);
    for (int i = 1; i < n; ++i) {
        const double u = -M_PI / 2 + i * h;
        sum += f(u) * ((i % 2 == 1) ? 4.0 : 2.0);
    }
    const double integral = sum * h / 3.0;
    return std::fabs(integral - M_PI * bessel_j0(c));
}

} // namespace linescatter
