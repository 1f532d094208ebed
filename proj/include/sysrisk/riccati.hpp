#pragma once

#include <vector>

#include "sysrisk/grid.hpp"
#include "sysrisk/model.hpp"

namespace sysrisk {

/// Scalar Riccati equation shared by all three equilibria:
///
///   d/dt eta = 2(a+q) eta + B eta^2 - (eps - q^2),   eta_T = c,
///
/// with B = 1 - 1/N (open loop), 1 - 1/N^2 (closed loop), 1 (mean-field game).
struct RiccatiCoefficients {
    double square_coeff = 1.0;   // B
    double discriminant = 0.0;   // R = (a+q)^2 + B (eps - q^2)
    double delta_plus = 0.0;     // -(a+q) + sqrt(R)
    double delta_minus = 0.0;    // -(a+q) - sqrt(R)
};

double square_coefficient(EquilibriumMode mode, int n_banks);

/// Throws DegenerateRiccati when R == 0 (a+q == 0 and eps == q^2).
RiccatiCoefficients roots(const ModelParams& params, EquilibriumMode mode);

/// Closed-form eta_t for one (params, mode) pair. Coefficients are computed
/// once so repeated evaluation on a grid is cheap.
class RiccatiCurve {
public:
    RiccatiCurve(const ModelParams& params, EquilibriumMode mode);

    double operator()(double t) const;

    const RiccatiCoefficients& coefficients() const { return coeffs_; }
    EquilibriumMode mode() const { return mode_; }
    double horizon() const { return horizon_; }
    double terminal_value() const { return terminal_; }

private:
    EquilibriumMode mode_;
    RiccatiCoefficients coeffs_;
    double rate_;      // a + q
    double gap_;       // eps - q^2
    double terminal_;  // c
    double horizon_;
};

double eta_closed_form(double t, const ModelParams& params, EquilibriumMode mode);

/// Infinite-horizon constant (eps - q^2) / (-delta_minus). Only defined for c == 0.
double eta_limit(const ModelParams& params, EquilibriumMode mode);

struct RiccatiSolution {
    EquilibriumMode mode = EquilibriumMode::ClosedLoop;
    RiccatiCoefficients coeffs;   // discriminant may be 0 for integrator output
    double terminal_value = 0.0;
    TimeGrid grid;
    std::vector<double> values;   // indexed forward in time
};

/// Closed form sampled on a uniform grid with `n_steps` steps.
RiccatiSolution solve_riccati(const ModelParams& params, EquilibriumMode mode, int n_steps);

/// Classical RK4 backward from eta_T = c with a fixed step (shrunk so that it
/// divides T). Works in the degenerate R == 0 case as well.
RiccatiSolution integrate_riccati(const ModelParams& params, EquilibriumMode mode, double step);

/// mu_t = 1/2 sigma^2 (1 - rho^2) F int_t^T eta_s ds with F = 1 - 1/N (closed
/// loop) or 1 (mean-field game). Throws UnsupportedMode for the open loop.
double mu(double t, const ModelParams& params, EquilibriumMode mode, int panels = 1000);

}  // namespace sysrisk
