#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <variant>
#include <vector>

#include "linescatter/errors.hpp"
#include "linescatter/numerics.hpp"

namespace linescatter {

// Left-incident plane wave. theta0 is restricted to the open interval
// (-pi/2, pi/2): grazing incidence makes omega(p0) = 0 and the single-channel
// closed forms divide by it.
struct IncidentWave {
    double k = 0.0;
    double theta0 = 0.0;

    double p0() const { return k * std::sin(theta0); }
    double omega0() const { return k * std::cos(theta0); }
};

// Finite array of point interactions on the y-axis. Positions need not be
// distinct; the Foldy matrix stays well-defined with J0(0) = 1.
struct DeltaLineArray {
    std::vector<cdouble> couplings; // inverse length
    std::vector<double> positions;  // length
};

// delta(x) times a finite Fourier sum. `frequencies` holds alpha_1..alpha_N
// (positive, strictly increasing); by convention alpha_0 = 0 and
// alpha_{-n} = -alpha_n. Harmonic indices missing from the map carry
// coupling zero.
struct FourierLinePotential {
    std::map<int, cdouble> harmonics;
    std::vector<double> frequencies;

    int max_index() const { return static_cast<int>(frequencies.size()); }

    cdouble coupling(int n) const {
        auto it = harmonics.find(n);
        return it == harmonics.end() ? cdouble(0.0, 0.0) : it->second;
    }

    double frequency(int n) const {
        if (n == 0) return 0.0;
        const double a = frequencies.at(static_cast<size_t>(std::abs(n)) - 1);
        return n > 0 ? a : -a;
    }
};

// Dirac comb embedded in 2D: identical deltas at y = n * spacing.
struct PeriodicComb {
    cdouble coupling;
    double spacing = 0.0;

    double base_frequency() const { return 2.0 * M_PI / spacing; }
};

using Profile = std::variant<DeltaLineArray, FourierLinePotential, PeriodicComb>;

// zeta * delta(a x + b y) * g(b x - a y): a tilted line potential that the
// geometry module reduces to canonical delta(x) g(y) form.
struct GeneralLinePotential {
    cdouble zeta;
    double a = 0.0;
    double b = 0.0;
    Profile profile;
};

const IncidentWave& validate(const IncidentWave& w);
const DeltaLineArray& validate(const DeltaLineArray& p);
const FourierLinePotential& validate(const FourierLinePotential& p);
const PeriodicComb& validate(const PeriodicComb& p);
const GeneralLinePotential& validate(const GeneralLinePotential& p);
const Profile& validate(const Profile& p);

// Truncated Fourier representation of the comb: frequencies n*(2pi/a) for
// n = 1..N, every coupling equal to z/a.
FourierLinePotential comb_to_fourier(const PeriodicComb& comb, int truncation);

// Smallest N such that k < alpha (N+1)/2, so harmonics beyond N cannot enter
// any admissible mode set.
int required_truncation(double base_frequency, const IncidentWave& wave);
int required_truncation(const PeriodicComb& comb, const IncidentWave& wave);

} // namespace linescatter
