#include "linescatter/geometry.hpp"

#include <cmath>

namespace linescatter {

namespace {

Profile stretch_profile(const Profile& profile, cdouble zeta_prime, double s) {
    if (const auto* arr = std::get_if<DeltaLineArray>(&profile)) {
        DeltaLineArray out = *arr;
        for (cdouble& c : out.couplings) c *= zeta_prime;
        for (double& a : out.positions) a /= s;
        return out;
    }
    if (const auto* four = std::get_if<FourierLinePotential>(&profile)) {
        FourierLinePotential out = *four;
        for (auto& [n, c] : out.harmonics) c *= zeta_prime;
        for (double& a : out.frequencies) a *= s;
        return out;
    }
    PeriodicComb out = std::get<PeriodicComb>(profile);
    out.coupling *= zeta_prime;
    out.spacing /= s;
    return out;
}

} // namespace

CanonicalReduction reduce(const GeneralLinePotential& potential, const IncidentWave& wave) {
    validate(wave);
    if (potential.a == 0.0 && potential.b == 0.0)
        throw DegenerateLine("reduce: a and b are both zero");
    validate(potential);

    CanonicalReduction red;
    const double s = std::hypot(potential.a, potential.b);
    red.stretch = s;
    red.zeta_prime = potential.zeta / s;

    if (potential.a == 0.0) {
        // Already canonical; only the stretch bookkeeping applies.
        red.rotation = 0.0;
        red.theta0_prime = wave.theta0;
    } else {
        red.rotation = (potential.b != 0.0)
                           ? std::atan(-potential.a / potential.b)
                           : -(M_PI / 2.0) * (potential.a > 0.0 ? 1.0 : -1.0);
        const double sign = red.rotation > 0.0 ? 1.0 : -1.0;
        red.theta0_prime = wave.theta0 + std::fabs(red.rotation) - (M_PI / 2.0) * sign;
    }

    if (std::fabs(std::cos(red.theta0_prime)) < 1e-12)
        throw GrazingAfterRotation("reduce: adjusted incidence angle hits +-pi/2");

    red.within_left_incidence = std::fabs(red.theta0_prime) < M_PI / 2.0;
    red.profile = stretch_profile(potential.profile, red.zeta_prime, s);
    red.wave = IncidentWave{wave.k, red.theta0_prime};
    return red;
}

} // namespace linescatter
