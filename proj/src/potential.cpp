#include "linescatter/potential.hpp"

#include <cmath>
#include <sstream>

namespace linescatter {

namespace {

void fail_if(std::vector<std::string>& problems) {
    if (problems.empty()) return;
    std::ostringstream os;
    for (size_t i = 0; i < problems.size(); ++i) {
        if (i) os << "; ";
        os << problems[i];
    }
    throw InvalidPotential(os.str());
}

} // namespace

const IncidentWave& validate(const IncidentWave& w) {
    std::vector<std::string> problems;
    if (!(w.k > 0.0)) problems.push_back("k: must be positive");
    if (!(std::fabs(w.theta0) < M_PI / 2.0))
        problems.push_back("theta0: must lie in the open interval (-pi/2, pi/2)");
    if (!std::isfinite(w.k) || !std::isfinite(w.theta0))
        problems.push_back("wave: parameters must be finite");
    fail_if(problems);
    return w;
}

const DeltaLineArray& validate(const DeltaLineArray& p) {
    std::vector<std::string> problems;
    if (p.couplings.empty()) problems.push_back("couplings: need at least one entry");
    if (p.couplings.size() != p.positions.size())
        problems.push_back("positions: length must match couplings");
    for (double a : p.positions)
        if (!std::isfinite(a)) problems.push_back("positions: entries must be finite");
    fail_if(problems);
    return p;
}

const FourierLinePotential& validate(const FourierLinePotential& p) {
    std::vector<std::string> problems;
    double prev = 0.0;
    for (size_t i = 0; i < p.frequencies.size(); ++i) {
        const double a = p.frequencies[i];
        if (!(a > 0.0)) {
            problems.push_back("frequencies: must be positive");
            break;
        }
        if (i > 0 && !(a > prev)) {
            problems.push_back("frequencies: must be strictly increasing");
            break;
        }
        prev = a;
    }
    const int n_max = p.max_index();
    for (const auto& [n, z] : p.harmonics) {
        (void)z;
        if (std::abs(n) > n_max) {
            problems.push_back("harmonics: index exceeds the number of frequencies");
            break;
        }
    }
    fail_if(problems);
    return p;
}

const PeriodicComb& validate(const PeriodicComb& p) {
    std::vector<std::string> problems;
    if (!(p.spacing > 0.0)) problems.push_back("spacing: must be positive");
    fail_if(problems);
    return p;
}

const GeneralLinePotential& validate(const GeneralLinePotential& p) {
    std::vector<std::string> problems;
    if (!(p.a * p.a + p.b * p.b > 0.0)) problems.push_back("a, b: must not both be zero");
    fail_if(problems);
    validate(p.profile);
    return p;
}

const Profile& validate(const Profile& p) {
    std::visit([](const auto& v) { validate(v); }, p);
    return p;
}

FourierLinePotential comb_to_fourier(const PeriodicComb& comb, int truncation) {
    validate(comb);
    if (truncation < 0) throw InvalidPotential("truncation: must be non-negative");
    FourierLinePotential out;
    const double alpha = comb.base_frequency();
    const cdouble z = comb.coupling / comb.spacing;
    for (int n = 1; n <= truncation; ++n) out.frequencies.push_back(n * alpha);
    for (int n = -truncation; n <= truncation; ++n) out.harmonics[n] = z;
    return out;
}

int required_truncation(double base_frequency, const IncidentWave& wave) {
    if (!(base_frequency > 0.0))
        throw InvalidPotential("base frequency: must be positive");
    validate(wave);
    int n = std::max(0, static_cast<int>(std::floor(2.0 * wave.k / base_frequency)) - 1);
    while (!(wave.k < base_frequency * (n + 1) / 2.0)) ++n;
    return n;
}

int required_truncation(const PeriodicComb& comb, const IncidentWave& wave) {
    validate(comb);
    return required_truncation(comb.base_frequency(), wave);
}

} // namespace linescatter
