#include "sysrisk/riccati.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sysrisk {

namespace {

RiccatiCoefficients raw_coefficients(const ModelParams& p, EquilibriumMode mode) {
    RiccatiCoefficients rc;
    rc.square_coeff = square_coefficient(mode, p.n_banks);
    const double k = p.a + p.q;
    const double gap = p.epsilon - p.q * p.q;
    rc.discriminant = k * k + rc.square_coeff * gap;
    const double root = std::sqrt(rc.discriminant);
    // (sqrt(R) - k)(sqrt(R) + k) = B gap avoids cancellation when B gap << k^2
    rc.delta_plus = (k + root > 0.0) ? rc.square_coeff * gap / (k + root) : 0.0;
    rc.delta_minus = -k - root;
    return rc;
}

void check_time(double t, double horizon) {
    if (!(t >= 0.0 && t <= horizon)) {
        throw Error(ErrorKind::DomainError,
                    "t = " + std::to_string(t) + " outside [0, " + std::to_string(horizon) + "]", "t");
    }
}

}  // namespace

double square_coefficient(EquilibriumMode mode, int n_banks) {
    const double inv_n = 1.0 / static_cast<double>(n_banks);
    switch (mode) {
        case EquilibriumMode::OpenLoop: return 1.0 - inv_n;
        case EquilibriumMode::ClosedLoop: return 1.0 - inv_n * inv_n;
        case EquilibriumMode::MeanFieldGame: return 1.0;
    }
    return 1.0;
}

RiccatiCoefficients roots(const ModelParams& params, EquilibriumMode mode) {
    RiccatiCoefficients rc = raw_coefficients(params, mode);
    if (!(rc.discriminant > 0.0)) {
        throw Error(ErrorKind::DegenerateRiccati,
                    "R = 0 (a + q = 0 and epsilon = q^2); use integrate_riccati instead");
    }
    return rc;
}

RiccatiCurve::RiccatiCurve(const ModelParams& params, EquilibriumMode mode)
    : mode_(mode),
      coeffs_(roots(params, mode)),
      rate_(params.a + params.q),
      gap_(params.epsilon - params.q * params.q),
      terminal_(params.c),
      horizon_(params.horizon) {}

double RiccatiCurve::operator()(double t) const {
    check_time(t, horizon_);
    if (t == horizon_) return terminal_;

    // Closed form divided through by exp(2 sqrt(R) (T - t)) so that long
    // horizons do not overflow.
    const double width = coeffs_.delta_plus - coeffs_.delta_minus;  // 2 sqrt(R)
    const double decay = std::exp(-width * (horizon_ - t));
    const double one_minus = -std::expm1(-width * (horizon_ - t));
    const double num = -gap_ * one_minus
                       - terminal_ * (coeffs_.delta_plus - coeffs_.delta_minus * decay);
    const double den = (coeffs_.delta_minus - coeffs_.delta_plus * decay)
                       - terminal_ * coeffs_.square_coeff * one_minus;
    if (!(den < 0.0)) {
        throw std::logic_error("Riccati closed form: denominator must stay negative");
    }
    return num / den;
}

double eta_closed_form(double t, const ModelParams& params, EquilibriumMode mode) {
    return RiccatiCurve(params, mode)(t);
}

double eta_limit(const ModelParams& params, EquilibriumMode mode) {
    if (params.c != 0.0) {
        throw Error(ErrorKind::UnsupportedTerminalCost,
                    "infinite-horizon limit is only available for c = 0", "c");
    }
    const RiccatiCoefficients rc = roots(params, mode);
    return (params.epsilon - params.q * params.q) / (-rc.delta_minus);
}

RiccatiSolution solve_riccati(const ModelParams& params, EquilibriumMode mode, int n_steps) {
    const RiccatiCurve curve(params, mode);
    RiccatiSolution sol;
    sol.mode = mode;
    sol.coeffs = curve.coefficients();
    sol.terminal_value = params.c;
    sol.grid = TimeGrid{0.0, params.horizon, n_steps};
    sol.values.resize(sol.grid.size());
    for (int k = 0; k < sol.grid.size(); ++k) sol.values[k] = curve(sol.grid.at(k));
    return sol;
}

RiccatiSolution integrate_riccati(const ModelParams& params, EquilibriumMode mode, double step) {
    if (!(step > 0.0) || step > params.horizon / 10.0) {
        throw Error(ErrorKind::DomainError, "RK4 step must lie in (0, T/10]", "step");
    }
    RiccatiSolution sol;
    sol.mode = mode;
    sol.coeffs = raw_coefficients(params, mode);
    sol.terminal_value = params.c;
    sol.grid = TimeGrid::with_max_step(0.0, params.horizon, step);

    const double k2 = 2.0 * (params.a + params.q);
    const double b = sol.coeffs.square_coeff;
    const double gap = params.epsilon - params.q * params.q;
    auto rhs = [&](double eta) { return k2 * eta + b * eta * eta - gap; };

    const int n = sol.grid.n_steps;
    const double h = -sol.grid.step();  // backward in time
    sol.values.assign(n + 1, 0.0);
    sol.values[n] = params.c;
    double eta = params.c;
    for (int i = n; i > 0; --i) {
        const double k1 = rhs(eta);
        const double k2s = rhs(eta + 0.5 * h * k1);
        const double k3 = rhs(eta + 0.5 * h * k2s);
        const double k4 = rhs(eta + h * k3);
        eta += h / 6.0 * (k1 + 2.0 * k2s + 2.0 * k3 + k4);
        sol.values[i - 1] = eta;
    }
    return sol;
}

double mu(double t, const ModelParams& params, EquilibriumMode mode, int panels) {
    double factor = 1.0;
    switch (mode) {
        case EquilibriumMode::OpenLoop:
            throw Error(ErrorKind::UnsupportedMode, "mu is defined for closed-loop and MFG only", "mode");
        case EquilibriumMode::ClosedLoop:
            factor = 1.0 - 1.0 / params.n_banks;
            break;
        case EquilibriumMode::MeanFieldGame:
            factor = 1.0;
            break;
    }
    check_time(t, params.horizon);
    const double load = 0.5 * params.sigma * params.sigma * (1.0 - params.rho * params.rho) * factor;
    if (load == 0.0 || t == params.horizon) return 0.0;
    const RiccatiCurve curve(params, mode);
    return load * simpson(curve, t, params.horizon, panels);
}

}  // namespace sysrisk
