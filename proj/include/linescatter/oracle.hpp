#pragma once

#include <vector>

#include "linescatter/foldy.hpp"
#include "linescatter/fourier.hpp"

namespace linescatter {

// Neumann-series iteration x^{(l+1)} = b - (A - I) x^{(l)}, x^{(0)} = b:
// the finite-dimensional form of the perturbative Born series. Converges only
// below the contraction threshold of the iteration matrix; a non-converging
// series signals strong coupling, not a defect.
struct BornSeriesResult {
    std::vector<std::vector<cdouble>> partial_sums; // solution iterates
    bool converged = false;
    int terms_used = 0;
    double estimated_ratio = 0.0; // empirical contraction factor of (A - I)
};

BornSeriesResult born_series_foldy(const DeltaLineArray& array, const IncidentWave& wave,
                                   int max_terms, double tol);

BornSeriesResult born_series_modes(const FourierLinePotential& potential,
                                   const IncidentWave& wave, int max_terms, double tol);

// ||A x - b||_inf / max(1, ||b||_inf).
double residual_verify(const ComplexMatrix& A, const std::vector<cdouble>& b,
                       const std::vector<cdouble>& x);
double residual_verify(const FoldySystem& system, const std::vector<cdouble>& x);
double residual_verify(const ModeSystem& system, const std::vector<cdouble>& x);

// 20 power-iteration steps on (A - I); cheap pass/fail convergence prognosis.
double contraction_estimate(const ComplexMatrix& A);

} // namespace linescatter
