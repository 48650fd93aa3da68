#include "linescatter/json_io.hpp"

#include <cmath>
#include <string>

namespace linescatter {

namespace {

json profile_to_json(const Profile& p);

json delta_to_json(const DeltaLineArray& p) {
    json doc;
    doc["kind"] = "delta_array";
    doc["couplings"] = json::array();
    for (const cdouble& z : p.couplings) doc["couplings"].push_back(serialize_complex(z));
    doc["positions"] = p.positions;
    return doc;
}

json fourier_to_json(const FourierLinePotential& p) {
    json doc;
    doc["kind"] = "fourier";
    doc["frequencies"] = p.frequencies;
    json h = json::object();
    for (const auto& [n, z] : p.harmonics) h[std::to_string(n)] = serialize_complex(z);
    doc["harmonics"] = h;
    return doc;
}

json comb_to_json(const PeriodicComb& p) {
    json doc;
    doc["kind"] = "comb";
    doc["coupling"] = serialize_complex(p.coupling);
    doc["spacing"] = p.spacing;
    return doc;
}

json general_to_json(const GeneralLinePotential& p) {
    json doc;
    doc["kind"] = "general";
    doc["zeta"] = serialize_complex(p.zeta);
    doc["a"] = p.a;
    doc["b"] = p.b;
    doc["profile"] = profile_to_json(p.profile);
    return doc;
}

json profile_to_json(const Profile& p) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, DeltaLineArray>) return delta_to_json(v);
            else if constexpr (std::is_same_v<T, FourierLinePotential>) return fourier_to_json(v);
            else return comb_to_json(v);
        },
        p);
}

DeltaLineArray delta_from_json(const json& doc) {
    DeltaLineArray p;
    for (const auto& z : doc.at("couplings")) p.couplings.push_back(parse_complex(z));
    p.positions = doc.at("positions").get<std::vector<double>>();
    return p;
}

FourierLinePotential fourier_from_json(const json& doc) {
    FourierLinePotential p;
    p.frequencies = doc.at("frequencies").get<std::vector<double>>();
    for (const auto& [key, value] : doc.at("harmonics").items())
        p.harmonics[std::stoi(key)] = parse_complex(value);
    return p;
}

PeriodicComb comb_from_json(const json& doc) {
    PeriodicComb p;
    p.coupling = parse_complex(doc.at("coupling"));
    p.spacing = doc.at("spacing").get<double>();
    return p;
}

Profile profile_from_json(const json& doc) {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "delta_array") return delta_from_json(doc);
    if (kind == "fourier") return fourier_from_json(doc);
    if (kind == "comb") return comb_from_json(doc);
    throw InvalidConfig("profile kind must be delta_array, fourier, or comb, got '" + kind +
                        "'");
}

} // namespace

cdouble parse_complex(const json& v) {
    if (v.is_number()) return cdouble(v.get<double>(), 0.0);
    if (!v.is_array() || v.size() != 2)
        throw InvalidConfig("complex scalar must be a two-element [re, im] array");
    return cdouble(v[0].get<double>(), v[1].get<double>());
}

json serialize_complex(const cdouble& z) { return json::array({z.real(), z.imag()}); }

PotentialDescriptor parse_potential(const json& doc) {
    if (!doc.is_object() || !doc.contains("kind"))
        throw InvalidConfig("potential document needs a \"kind\" discriminator");
    const std::string kind = doc.at("kind").get<std::string>();
    try {
        if (kind == "delta_array") return delta_from_json(doc);
        if (kind == "fourier") return fourier_from_json(doc);
        if (kind == "comb") return comb_from_json(doc);
        if (kind == "general") {
            GeneralLinePotential p;
            p.zeta = parse_complex(doc.at("zeta"));
            p.a = doc.at("a").get<double>();
            p.b = doc.at("b").get<double>();
            p.profile = profile_from_json(doc.at("profile"));
            return p;
        }
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("malformed potential document: ") + e.what());
    }
    throw InvalidConfig("unknown potential kind '" + kind + "'");
}

json serialize_potential(const PotentialDescriptor& potential) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GeneralLinePotential>) return general_to_json(v);
            else if constexpr (std::is_same_v<T, DeltaLineArray>) return delta_to_json(v);
            else if constexpr (std::is_same_v<T, FourierLinePotential>) return fourier_to_json(v);
            else return comb_to_json(v);
        },
        potential);
}

json serialize_profile(const Profile& profile) { return profile_to_json(profile); }

IncidentWave parse_wave(const json& doc) {
    try {
        IncidentWave w;
        w.k = doc.at("k").get<double>();
        w.theta0 = doc.at("theta0_deg").get<double>() * M_PI / 180.0;
        return w;
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("malformed wave document: ") + e.what());
    }
}

json serialize_wave(const IncidentWave& wave) {
    json doc;
    doc["k"] = wave.k;
    doc["theta0_deg"] = wave.theta0 * 180.0 / M_PI;
    return doc;
}

} // namespace linescatter
