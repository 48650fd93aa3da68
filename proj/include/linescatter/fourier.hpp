#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "linescatter/potential.hpp"

namespace linescatter {

// Common frequency quantum of a commensurate Fourier potential:
// alpha_n = multipliers[n-1] * base for every listed frequency.
struct CommensurateBase {
    double base = 0.0;
    std::vector<long long> multipliers;
};

// Largest base frequency reproducing every alpha_n as an integer multiple
// within the relative tolerance; denominators are searched up to 1e6.
// Throws IncommensurateFrequencies when no such base exists.
CommensurateBase commensurate_base(const FourierLinePotential& potential,
                                   double tolerance = 1e-9);

// Admissible lattice shifts: integers s with |p0 + s*base| <= k - eps_grazing,
// eps_grazing = 1e-9 k. Shift 0 (the incident channel) is always present.
struct ModeSet {
    double base = 0.0;
    std::vector<int> shifts; // strictly increasing
    std::vector<double> p;     // p0 + s*base
    std::vector<double> omega; // sqrt(k^2 - p^2)

    int index_of(int shift) const;
};

ModeSet enumerate_modes(double base, const IncidentWave& wave);

// Closed-form mode set for the (j, q) cell that contains p0; requires
// 2k/(j+1) < base <= 2k/j. Used as an independent cross-check of
// enumerate_modes.
ModeSet mode_set_formula(int j, int q, double base, const IncidentWave& wave);

// Linear system over the admissible shifts:
//   A_{s,s'} = delta_{s,s'} + (i / (2 omega_s)) Z(s - s'),   b_s = 2 pi delta_{s,0},
// where Z(c) is the total coupling carried by lattice offset c.
struct ModeSystem {
    ComplexMatrix matrix;
    std::vector<cdouble> rhs;
    ModeSet modes;
};

ModeSystem build_mode_system(const FourierLinePotential& potential,
                             const CommensurateBase& base, const ModeSet& modes,
                             const IncidentWave& wave);

// One outgoing plane-wave channel. The same coefficient appears on the
// transmission side (theta) and the reflection side (pi - theta). y is the
// dimensionless coefficient in f(theta) = (-i/sqrt(2 pi)) sum y_s [...];
// the distributional prefactor is applied at presentation time.
struct Beam {
    int shift = 0;
    double theta = 0.0; // arcsin(sin theta0 + s*base/k)
    cdouble y;
};

struct DiscreteAmplitude {
    double k = 0.0;
    double theta0 = 0.0;
    std::vector<Beam> beams; // sorted by shift

    const Beam* find(int shift) const;
};

// End-to-end pipeline: commensurate base -> modes -> system -> solve -> beams.
DiscreteAmplitude solve_beams(const FourierLinePotential& potential,
                              const IncidentWave& wave);

// Closed-form determinant for a single-harmonic potential in the two-channel
// regime k < alpha <= 2k (Case 2.b when p0 >= alpha - k, mirror 2.c when
// p0 <= k - alpha).
cdouble case2_determinant(const FourierLinePotential& potential, const IncidentWave& wave);

// Closed-form two-channel amplitude; matches solve_beams on its domain.
DiscreteAmplitude case2_amplitude(const FourierLinePotential& potential,
                                  const IncidentWave& wave);

// For purely imaginary z0 with positive imaginary part and |z0| < alpha,
// returns a (k, theta0) with k in [|z0|/2, alpha/2) and
// 2 k cos(theta0) + i z0 = 0: the directional-laser spectral singularity of
// the single-channel regime. Absent otherwise.
std::optional<std::pair<double, double>> directional_laser_condition(cdouble z0,
                                                                     double alpha);

// Comb scattering via Theorem-1 truncation: converts to the minimal Fourier
// representative (or the supplied truncation) and delegates to solve_beams.
DiscreteAmplitude comb_beams(const PeriodicComb& comb, const IncidentWave& wave,
                             std::optional<int> truncation_override = std::nullopt);

} // namespace linescatter
