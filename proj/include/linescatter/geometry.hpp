#pragma once

#include "linescatter/potential.hpp"

namespace linescatter {

// Result of rotating a tilted line potential into canonical delta(x) g(y)
// form. The stretch s = sqrt(a^2 + b^2) is pushed into the profile parameters
// and zeta' = zeta / s is folded into the profile couplings, so downstream
// solvers only ever see canonical descriptors.
struct CanonicalReduction {
    cdouble zeta_prime;
    double stretch = 1.0;
    double rotation = 0.0;     // phi = arctan(-a/b); -(pi/2) sgn(a) when b = 0
    double theta0_prime = 0.0; // theta0 + |phi| - (pi/2) sgn(phi)
    Profile profile;           // canonical profile with zeta' folded in
    IncidentWave wave;         // k unchanged, theta0 = theta0_prime

    // False when the adjusted angle leaves (-pi/2, pi/2); the problem is then
    // no longer a left-incident one and the caller must re-parameterize.
    bool within_left_incidence = true;
};

CanonicalReduction reduce(const GeneralLinePotential& potential, const IncidentWave& wave);

} // namespace linescatter
