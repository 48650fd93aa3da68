#include "linescatter/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace linescatter {

namespace {

const cdouble kImag(0.0, 1.0);

// Best rational approximation p/q to r (r > 0) with q <= q_max, by continued
// fractions. A convergent is accepted only if it meets the relative tolerance
// AND beats the generic Diophantine error ~ r/q^2 by a wide margin; a generic
// irrational (e.g. sqrt(2)) always has q <= 1e6 approximations inside a 1e-9
// tolerance, and those must not be mistaken for a rational relation.
bool rationalize(double r, double tol, long long q_max, long long* p_out,
                 long long* q_out) {
    long long h_prev = 1, h = static_cast<long long>(std::floor(r));
    long long k_prev = 0, k = 1;
    double frac = r - std::floor(r);
    auto acceptable = [&](long long p, long long q) {
        const double err = std::fabs(static_cast<double>(p) / q - r);
        return err <= tol * std::fabs(r) &&
               err * static_cast<double>(q) * static_cast<double>(q) <=
                   1e-4 * std::fabs(r);
    };
    for (int iter = 0; iter < 64; ++iter) {
        if (acceptable(h, k)) {
            *p_out = h;
            *q_out = k;
            return true;
        }
        if (frac < 1e-15) break;
        const double inv = 1.0 / frac;
        const long long a = static_cast<long long>(std::floor(inv));
        frac = inv - std::floor(inv);
        const long long h_next = a * h + h_prev;
        const long long k_next = a * k + k_prev;
        if (k_next > q_max) break;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
    }
    if (acceptable(h, k)) {
        *p_out = h;
        *q_out = k;
        return true;
    }
    return false;
}

// Total coupling carried by each lattice offset: Z(c) = sum of z_n over
// harmonics whose frequency is c * base (negative n contribute at -c).
std::map<long long, cdouble> offset_couplings(const FourierLinePotential& potential,
                                              const CommensurateBase& base) {
    std::map<long long, cdouble> z;
    for (const auto& [n, c] : potential.harmonics) {
        if (n == 0) {
            z[0] += c;
        } else {
            const long long m = base.multipliers.at(static_cast<size_t>(std::abs(n)) - 1);
            z[n > 0 ? m : -m] += c;
        }
    }
    return z;
}

ModeSet make_mode_set(double base, const IncidentWave& wave, std::vector<int> shifts) {
    ModeSet set;
    set.base = base;
    set.shifts = std::move(shifts);
    for (int s : set.shifts) {
        const double p = wave.p0() + s * base;
        set.p.push_back(p);
        set.omega.push_back(std::sqrt(std::max(0.0, wave.k * wave.k - p * p)));
    }
    return set;
}

DiscreteAmplitude beams_from_solution(const ModeSet& modes,
                                      const std::vector<cdouble>& x,
                                      const IncidentWave& wave) {
    DiscreteAmplitude amp;
    amp.k = wave.k;
    amp.theta0 = wave.theta0;
    for (size_t i = 0; i < modes.shifts.size(); ++i) {
        Beam b;
        b.shift = modes.shifts[i];
        b.theta = std::asin(std::sin(wave.theta0) + b.shift * modes.base / wave.k);
        b.y = x[i] - (b.shift == 0 ? 2.0 * M_PI : 0.0);
        amp.beams.push_back(b);
    }
    return amp;
}

// Single-harmonic potential in the k < alpha <= 2k band, classified into the
// two-channel sub-cases.
struct Case2Setup {
    double alpha = 0.0;
    bool mirror = false; // false: modes {-1, 0}; true: modes {0, +1}
    double omega_side = 0.0; // omega at the side channel (p0 -+ alpha)
    double omega_0 = 0.0;
    cdouble z0, z_minus, z_plus;
};

Case2Setup case2_setup(const FourierLinePotential& potential, const IncidentWave& wave) {
    validate(potential);
    validate(wave);
    if (potential.frequencies.size() != 1)
        throw OutOfRegime("case 2: potential must have a single harmonic frequency");
    Case2Setup s;
    s.alpha = potential.frequencies[0];
    const double k = wave.k;
    if (!(k < s.alpha && s.alpha <= 2.0 * k))
        throw OutOfRegime("case 2: requires k < alpha <= 2k");
    const double p0 = wave.p0();
    if (p0 >= s.alpha - k) {
        s.mirror = false;
    } else if (p0 <= k - s.alpha) {
        s.mirror = true;
    } else {
        throw OutOfRegime("case 2: p0 falls in the single-channel window (case 2.a)");
    }
    const double p_side = p0 + (s.mirror ? s.alpha : -s.alpha);
    const double eps = 1e-9 * k;
    if (k - std::fabs(p_side) <= eps || k - std::fabs(p0) <= eps)
        throw GrazingMode("case 2: a channel is within the grazing band");
    s.omega_side = std::sqrt(k * k - p_side * p_side);
    s.omega_0 = wave.omega0();
    s.z0 = potential.coupling(0);
    s.z_minus = potential.coupling(-1);
    s.z_plus = potential.coupling(1);
    return s;
}

cdouble case2_det(const Case2Setup& s) {
    const double w_side = s.omega_side, w0 = s.omega_0;
    return (s.z_minus * s.z_plus - s.z0 * s.z0 + 2.0 * kImag * (w_side + w0) * s.z0 +
            4.0 * w_side * w0) /
           (4.0 * w_side * w0);
}

} // namespace

int ModeSet::index_of(int shift) const {
    const auto it = std::lower_bound(shifts.begin(), shifts.end(), shift);
    if (it == shifts.end() || *it != shift) return -1;
    return static_cast<int>(it - shifts.begin());
}

const Beam* DiscreteAmplitude::find(int shift) const {
    for (const Beam& b : beams)
        if (b.shift == shift) return &b;
    return nullptr;
}

CommensurateBase commensurate_base(const FourierLinePotential& potential,
                                   double tolerance) {
    validate(potential);
    if (potential.frequencies.empty())
        throw InvalidPotential("frequencies: need at least one to determine a base");

    constexpr long long kMaxDenominator = 1000000;
    const double alpha1 = potential.frequencies[0];
    std::vector<long long> num(potential.frequencies.size());
    std::vector<long long> den(potential.frequencies.size());
    for (size_t i = 0; i < potential.frequencies.size(); ++i) {
        if (!rationalize(potential.frequencies[i] / alpha1, tolerance, kMaxDenominator,
                         &num[i], &den[i])) {
            std::ostringstream os;
            os << "no rational relation for frequency ratio "
               << potential.frequencies[i] / alpha1 << " up to denominator "
               << kMaxDenominator;
            throw IncommensurateFrequencies(os.str());
        }
    }

    long long lcm = 1;
    for (long long q : den) {
        lcm = std::lcm(lcm, q);
        if (lcm > 1000000000000LL)
            throw IncommensurateFrequencies("denominator lcm exceeds bounds");
    }
    std::vector<long long> mult(num.size());
    long long g = 0;
    for (size_t i = 0; i < num.size(); ++i) {
        mult[i] = num[i] * (lcm / den[i]);
        g = std::gcd(g, mult[i]);
    }
    for (long long& m : mult) m /= g;

    // Anchor the base on the first frequency so that potentials sharing their
    // lowest harmonic (e.g. a comb at different truncations) get bitwise the
    // same base, which keeps downstream solves exactly reproducible.
    CommensurateBase base{alpha1 / static_cast<double>(mult[0]), std::move(mult)};

    for (size_t i = 0; i < potential.frequencies.size(); ++i) {
        const double fitted = base.base * static_cast<double>(base.multipliers[i]);
        if (std::fabs(fitted - potential.frequencies[i]) >
            tolerance * potential.frequencies[i])
            throw IncommensurateFrequencies("fitted base fails the tolerance check");
    }
    return base;
}

ModeSet enumerate_modes(double base, const IncidentWave& wave) {
    if (!(base > 0.0)) throw InvalidConfig("enumerate_modes: base must be positive");
    validate(wave);
    const double k = wave.k;
    const double p0 = wave.p0();
    const double eps = 1e-9 * k;

    const int lo = static_cast<int>(std::floor((-k - p0) / base)) - 1;
    const int hi = static_cast<int>(std::ceil((k - p0) / base)) + 1;
    std::vector<int> shifts;
    for (int s = lo; s <= hi; ++s) {
        const double p = p0 + s * base;
        if (std::fabs(std::fabs(p) - k) <= eps) {
            std::ostringstream os;
            os << "shift " << s << " gives |p| within 1e-9 k of k; omega ~ 0 makes the "
               << "mode system undefined at these exact parameters";
            throw GrazingMode(os.str());
        }
        if (std::fabs(p) <= k - eps) shifts.push_back(s);
    }
    return make_mode_set(base, wave, std::move(shifts));
}

ModeSet mode_set_formula(int j, int q, double base, const IncidentWave& wave) {
    validate(wave);
    const double k = wave.k;
    if (j < 1 || q < 0 || q > j) throw OutOfCell("mode_set_formula: need j >= 1, 0 <= q <= j");
    if (!(2.0 * k / (j + 1) < base && base <= 2.0 * k / j))
        throw OutOfCell("mode_set_formula: base violates 2k/(j+1) < base <= 2k/j");

    const double p0 = wave.p0();
    std::vector<int> shifts;
    if (-k + q * base <= p0 && p0 <= k - (j - q) * base) {
        for (int s = -q; s <= -q + j; ++s) shifts.push_back(s);
    } else if (k - (j - q) * base < p0 && p0 < -k + (q + 1) * base) {
        for (int s = -q; s <= -q + j - 1; ++s) shifts.push_back(s);
    } else {
        throw OutOfCell("mode_set_formula: p0 outside the (j, q) cell");
    }
    return make_mode_set(base, wave, std::move(shifts));
}

ModeSystem build_mode_system(const FourierLinePotential& potential,
                             const CommensurateBase& base, const ModeSet& modes,
                             const IncidentWave& wave) {
    validate(potential);
    validate(wave);
    const auto z = offset_couplings(potential, base);
    const int n = static_cast<int>(modes.shifts.size());
    ModeSystem sys;
    sys.modes = modes;
    sys.matrix = ComplexMatrix(n, n);
    sys.rhs.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const long long offset = modes.shifts[i] - modes.shifts[j];
            cdouble coupling = 0.0;
            if (const auto it = z.find(offset); it != z.end()) coupling = it->second;
            sys.matrix.at(i, j) =
                (i == j ? 1.0 : 0.0) + kImag * coupling / (2.0 * modes.omega[i]);
        }
        if (modes.shifts[i] == 0) sys.rhs[i] = 2.0 * M_PI;
    }
    return sys;
}

DiscreteAmplitude solve_beams(const FourierLinePotential& potential,
                              const IncidentWave& wave) {
    validate(potential);
    validate(wave);

    ModeSystem sys;
    if (potential.frequencies.empty()) {
        // Only the n = 0 harmonic: single incident channel, no lattice.
        const ModeSet modes = make_mode_set(1.0, wave, {0});
        sys = build_mode_system(potential, CommensurateBase{1.0, {}}, modes, wave);
    } else {
        const CommensurateBase base = commensurate_base(potential);
        const ModeSet modes = enumerate_modes(base.base, wave);
        sys = build_mode_system(potential, base, modes, wave);
    }

    SolveReport rep;
    try {
        rep = solve_dense(sys.matrix, sys.rhs);
    } catch (const SingularMatrix&) {
        throw SpectralSingularity(wave.k, wave.theta0,
                                  "mode system singular: spectral singularity");
    }
    return beams_from_solution(sys.modes, rep.solution, wave);
}

cdouble case2_determinant(const FourierLinePotential& potential, const IncidentWave& wave) {
    return case2_det(case2_setup(potential, wave));
}

DiscreteAmplitude case2_amplitude(const FourierLinePotential& potential,
                                  const IncidentWave& wave) {
    const Case2Setup s = case2_setup(potential, wave);
    const cdouble det = case2_det(s);
    const double scale = 1.0 + std::abs(s.z0) + std::abs(s.z_minus * s.z_plus);
    if (std::abs(det) < 1e-14 * scale)
        throw SpectralSingularity(wave.k, wave.theta0, "case 2: det A vanishes");

    // Two channels: the incident one and the side channel fed by z_- (2.b,
    // shift -1) or z_+ (2.c, shift +1).
    const cdouble y0 = -2.0 * M_PI * (det - 1.0 - kImag * s.z0 / (2.0 * s.omega_side)) / det;
    const cdouble y_side =
        -2.0 * M_PI * kImag * (s.mirror ? s.z_plus : s.z_minus) / (2.0 * s.omega_side * det);

    DiscreteAmplitude amp;
    amp.k = wave.k;
    amp.theta0 = wave.theta0;
    const int side_shift = s.mirror ? 1 : -1;
    const double theta_side =
        std::asin(std::sin(wave.theta0) + side_shift * s.alpha / wave.k);
    if (side_shift < 0) {
        amp.beams.push_back({side_shift, theta_side, y_side});
        amp.beams.push_back({0, wave.theta0, y0});
    } else {
        amp.beams.push_back({0, wave.theta0, y0});
        amp.beams.push_back({side_shift, theta_side, y_side});
    }
    return amp;
}

std::optional<std::pair<double, double>> directional_laser_condition(cdouble z0,
                                                                     double alpha) {
    const double mag = std::abs(z0);
    if (mag == 0.0 || std::fabs(z0.real()) > 1e-14 * mag) return std::nullopt;
    if (!(z0.imag() > 0.0)) return std::nullopt;
    if (!(mag < alpha)) return std::nullopt;
    const double k = 0.5 * (mag / 2.0 + alpha / 2.0); // midpoint of [|z0|/2, alpha/2)
    const double theta0 = std::acos(mag / (2.0 * k));
    return std::make_pair(k, theta0);
}

DiscreteAmplitude comb_beams(const PeriodicComb& comb, const IncidentWave& wave,
                             std::optional<int> truncation_override) {
    validate(comb);
    validate(wave);
    const int n = truncation_override.value_or(required_truncation(comb, wave));
    return solve_beams(comb_to_fourier(comb, n), wave);
}

} // namespace linescatter
