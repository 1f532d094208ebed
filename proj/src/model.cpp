#include "sysrisk/model.hpp"

#include <cmath>

namespace sysrisk {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ConvexityViolated: return "ConvexityViolated";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::DegenerateRiccati: return "DegenerateRiccati";
        case ErrorKind::UnsupportedTerminalCost: return "UnsupportedTerminalCost";
        case ErrorKind::UnsupportedMode: return "UnsupportedMode";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NonzeroInitial: return "NonzeroInitial";
        case ErrorKind::PolicyMismatch: return "PolicyMismatch";
        case ErrorKind::CorrelationUnsupported: return "CorrelationUnsupported";
        case ErrorKind::UnknownExperiment: return "UnknownExperiment";
        case ErrorKind::UnknownQuery: return "UnknownQuery";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, std::string message, std::string field)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      field_(std::move(field)) {}

std::string_view to_string(EquilibriumMode mode) {
    switch (mode) {
        case EquilibriumMode::OpenLoop: return "open-loop";
        case EquilibriumMode::ClosedLoop: return "closed-loop";
        case EquilibriumMode::MeanFieldGame: return "mfg";
    }
    return "unknown";
}

EquilibriumMode parse_mode(std::string_view name) {
    if (name == "open" || name == "open-loop") return EquilibriumMode::OpenLoop;
    if (name == "closed" || name == "closed-loop") return EquilibriumMode::ClosedLoop;
    if (name == "mfg") return EquilibriumMode::MeanFieldGame;
    throw Error(ErrorKind::DomainError, "unknown equilibrium mode '" + std::string(name) + "'", "mode");
}

namespace {

void require(bool ok, const char* field, const std::string& what) {
    if (!ok) throw Error(ErrorKind::DomainError, std::string(field) + " " + what, field);
}

}  // namespace

ModelParams validate(const ModelParams& p) {
    require(p.n_banks >= 1, "n_banks", "must be >= 1");
    require(std::isfinite(p.a) && p.a >= 0.0, "a", "must be finite and >= 0");
    require(std::isfinite(p.q) && p.q >= 0.0, "q", "must be finite and >= 0");
    require(std::isfinite(p.epsilon) && p.epsilon >= 0.0, "epsilon", "must be finite and >= 0");
    require(std::isfinite(p.c) && p.c >= 0.0, "c", "must be finite and >= 0");
    require(std::isfinite(p.sigma) && p.sigma > 0.0, "sigma", "must be finite and > 0");
    require(std::isfinite(p.rho) && std::abs(p.rho) <= 1.0, "rho", "must lie in [-1, 1]");
    require(std::isfinite(p.horizon) && p.horizon > 0.0, "horizon", "must be finite and > 0");
    require(std::isfinite(p.default_level) && p.default_level < 0.0, "default_level",
            "must be finite and < 0");
    if (p.q * p.q > p.epsilon) {
        throw Error(ErrorKind::ConvexityViolated,
                    "q^2 = " + std::to_string(p.q * p.q) + " exceeds epsilon = " +
                        std::to_string(p.epsilon),
                    "q");
    }
    return p;
}

}  // namespace sysrisk
