#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sysrisk {

enum class ErrorKind {
    ConvexityViolated,
    DomainError,
    DegenerateRiccati,
    UnsupportedTerminalCost,
    UnsupportedMode,
    DimensionMismatch,
    NonzeroInitial,
    PolicyMismatch,
    CorrelationUnsupported,
    UnknownExperiment,
    UnknownQuery,
};

std::string_view to_string(ErrorKind kind);

/// Library error. `field()` names the offending parameter when there is one.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, std::string field = {});

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& field() const noexcept { return field_; }

private:
    ErrorKind kind_;
    std::string field_;
};

/// Symmetric N-bank lending model constants. Defaults are the N=10, a=1, q=1,
/// eps=10, T=1, c=0 set with sigma=1, rho=0 and default level -0.7.
struct ModelParams {
    int n_banks = 10;
    double a = 1.0;             // mean-reversion rate of interbank lending
    double q = 1.0;             // borrowing/lending incentive
    double epsilon = 10.0;      // running deviation penalty
    double c = 0.0;             // terminal deviation penalty
    double sigma = 1.0;
    double rho = 0.0;           // loading on the common noise
    double horizon = 1.0;
    double default_level = -0.7;

    bool operator==(const ModelParams&) const = default;
};

enum class EquilibriumMode { OpenLoop, ClosedLoop, MeanFieldGame };

std::string_view to_string(EquilibriumMode mode);
EquilibriumMode parse_mode(std::string_view name);

/// Returns `params` unchanged if every invariant holds; throws Error otherwise.
/// Range checks (DomainError) run before the convexity check q^2 <= epsilon.
ModelParams validate(const ModelParams& params);

}  // namespace sysrisk
