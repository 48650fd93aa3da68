#pragma once

#include <variant>

#include <nlohmann/json.hpp>

#include "linescatter/potential.hpp"

namespace linescatter {

using json = nlohmann::ordered_json;

using PotentialDescriptor =
    std::variant<DeltaLineArray, FourierLinePotential, PeriodicComb, GeneralLinePotential>;

// Documents carry a top-level "kind" discriminator
// ("delta_array" | "fourier" | "comb" | "general"); complex scalars are
// two-element [re, im] arrays; angles in files are degrees.
PotentialDescriptor parse_potential(const json& doc);
json serialize_potential(const PotentialDescriptor& potential);
json serialize_profile(const Profile& profile);

IncidentWave parse_wave(const json& doc); // {"k": ..., "theta0_deg": ...}
json serialize_wave(const IncidentWave& wave);

cdouble parse_complex(const json& v);
json serialize_complex(const cdouble& z);

} // namespace linescatter
