#pragma once

#include <stdexcept>
#include <string>

namespace linescatter {

// Base of all solver-level failures. `kind` is the stable machine-readable
// tag that the CLI emits in its error JSON.
class ScatterError : public std::runtime_error {
public:
    ScatterError(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct InvalidPotential : ScatterError {
    explicit InvalidPotential(const std::string& m) : ScatterError("InvalidPotential", m) {}
};

struct NonFinite : ScatterError {
    explicit NonFinite(const std::string& m) : ScatterError("NonFinite", m) {}
};

struct SingularMatrix : ScatterError {
    explicit SingularMatrix(const std::string& m) : ScatterError("SingularMatrix", m) {}
};

// Real (k, theta0) at which the solver matrix is singular: a zero-width
// resonance / laser threshold, not a numerical defect.
class SpectralSingularity : public ScatterError {
public:
    SpectralSingularity(double k, const std::string& m)
        : ScatterError("SpectralSingularity", m), k_(k) {}
    SpectralSingularity(double k, double theta0, const std::string& m)
        : ScatterError("SpectralSingularity", m), k_(k), theta0_(theta0), has_theta0_(true) {}
    double k() const noexcept { return k_; }
    bool has_theta0() const noexcept { return has_theta0_; }
    double theta0() const noexcept { return theta0_; }

private:
    double k_;
    double theta0_ = 0.0;
    bool has_theta0_ = false;
};

struct GrazingMode : ScatterError {
    explicit GrazingMode(const std::string& m) : ScatterError("GrazingMode", m) {}
};

struct IncommensurateFrequencies : ScatterError {
    explicit IncommensurateFrequencies(const std::string& m)
        : ScatterError("IncommensurateFrequencies", m) {}
};

struct DegenerateLine : ScatterError {
    explicit DegenerateLine(const std::string& m) : ScatterError("DegenerateLine", m) {}
};

struct GrazingAfterRotation : ScatterError {
    explicit GrazingAfterRotation(const std::string& m)
        : ScatterError("GrazingAfterRotation", m) {}
};

struct DegenerateSeparation : ScatterError {
    explicit DegenerateSeparation(const std::string& m)
        : ScatterError("DegenerateSeparation", m) {}
};

struct OutOfCell : ScatterError {
    explicit OutOfCell(const std::string& m) : ScatterError("OutOfCell", m) {}
};

struct OutOfRegime : ScatterError {
    explicit OutOfRegime(const std::string& m) : ScatterError("OutOfRegime", m) {}
};

struct InvalidConfig : ScatterError {
    explicit InvalidConfig(const std::string& m) : ScatterError("InvalidConfig", m) {}
};

} // namespace linescatter
