#include "linescatter/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace linescatter {

namespace {

double norm_inf(const std::vector<cdouble>& v) {
    double m = 0.0;
    for (const cdouble& e : v) m = std::max(m, std::abs(e));
    return m;
}

std::vector<cdouble> apply_iteration_matrix(const ComplexMatrix& A,
                                            const std::vector<cdouble>& v) {
    const int n = A.rows;
    std::vector<cdouble> w(n, 0.0);
    for (int i = 0; i < n; ++i) {
        cdouble s = 0.0;
        for (int j = 0; j < n; ++j) s += A.at(i, j) * v[j];
        w[i] = s - v[i]; // (A - I) v
    }
    return w;
}

BornSeriesResult iterate(const ComplexMatrix& A, const std::vector<cdouble>& b,
                         int max_terms, double tol) {
    if (max_terms < 1) throw InvalidConfig("born series: max_terms must be >= 1");
    BornSeriesResult res;
    res.estimated_ratio = contraction_estimate(A);

    std::vector<cdouble> x = b;
    res.partial_sums.push_back(x);
    res.terms_used = 1;
    for (int l = 1; l < max_terms; ++l) {
        const std::vector<cdouble> bx = apply_iteration_matrix(A, x);
        std::vector<cdouble> next(b.size());
        double diff = 0.0;
        for (size_t i = 0; i < b.size(); ++i) {
            next[i] = b[i] - bx[i];
            diff = std::max(diff, std::abs(next[i] - x[i]));
        }
        x = std::move(next);
        res.partial_sums.push_back(x);
        ++res.terms_used;
        if (diff < tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

} // namespace

double contraction_estimate(const ComplexMatrix& A) {
    const int n = A.rows;
    if (n == 0) return 0.0;
    std::vector<cdouble> v(n, cdouble(1.0, 0.0));
    double ratio = 0.0;
    for (int step = 0; step < 20; ++step) {
        const std::vector<cdouble> w = apply_iteration_matrix(A, v);
        const double nw = norm_inf(w);
        const double nv = norm_inf(v);
        if (nw == 0.0 || nv == 0.0) return 0.0;
        ratio = nw / nv;
        v = w;
        for (cdouble& e : v) e /= nw;
    }
    return ratio;
}

BornSeriesResult born_series_foldy(const DeltaLineArray& array, const IncidentWave& wave,
                                   int max_terms, double tol) {
    const FoldySystem sys = build_system(array, wave);
    return iterate(sys.matrix, sys.rhs, max_terms, tol);
}

BornSeriesResult born_series_modes(const FourierLinePotential& potential,
                                   const IncidentWave& wave, int max_terms, double tol) {
    validate(potential);
    validate(wave);
    ModeSystem sys;
    if (potential.frequencies.empty()) {
        const ModeSet modes = enumerate_modes(4.0 * wave.k, wave); // base > 2k: {0} only
        sys = build_mode_system(potential, CommensurateBase{1.0, {}}, modes, wave);
    } else {
        const CommensurateBase base = commensurate_base(potential);
        const ModeSet modes = enumerate_modes(base.base, wave);
        sys = build_mode_system(potential, base, modes, wave);
    }
    return iterate(sys.matrix, sys.rhs, max_terms, tol);
}

double residual_verify(const ComplexMatrix& A, const std::vector<cdouble>& b,
                       const std::vector<cdouble>& x) {
    if (A.rows != static_cast<int>(x.size()) || A.rows != static_cast<int>(b.size()))
        throw InvalidConfig("residual_verify: dimension mismatch");
    double worst = 0.0;
    for (int i = 0; i < A.rows; ++i) {
        cdouble s = 0.0;
        for (int j = 0; j < A.cols; ++j) s += A.at(i, j) * x[j];
        worst = std::max(worst, std::abs(s - b[i]));
    }
    return worst / std::max(1.0, norm_inf(b));
}

double residual_verify(const FoldySystem& system, const std::vector<cdouble>& x) {
    return residual_verify(system.matrix, system.rhs, x);
}

double residual_verify(const ModeSystem& system, const std::vector<cdouble>& x) {
    return residual_verify(system.matrix, system.rhs, x);
}

} // namespace linescatter
