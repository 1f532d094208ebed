#pragma once

#include <vector>

#include "sysrisk/grid.hpp"
#include "sysrisk/model.hpp"

namespace sysrisk {

/// Multiplier of eta (or phi) in the feedback gain: 1 - 1/N for the finite
/// games, 1 in the mean-field limit.
double control_factor(EquilibriumMode mode, int n_banks);

/// kappa_t in alpha^i = kappa_t (xbar - x^i).
double control_gain(double t, const ModelParams& params, EquilibriumMode mode);

/// A_t = a + kappa_t, the equilibrium-implied interbank lending rate.
double effective_rate(double t, const ModelParams& params, EquilibriumMode mode);

/// A = a + q + F * eta_bar; requires c == 0.
double effective_rate_limit(const ModelParams& params, EquilibriumMode mode);

/// V(t, x) = eta_t / 2 * (xbar - x^i)^2 + mu_t. Closed loop and MFG only.
double value_function(double t, double mean_dev, const ModelParams& params, EquilibriumMode mode);

/// E[(Xbar_t - X^i_t)^2] on a uniform grid over [0, end].
struct DeviationProfile {
    TimeGrid grid;
    std::vector<double> expected_sq_dev;
};

/// Builds the profile from the cumulative integral of the effective rate.
/// `n_steps` is rounded up to an even number.
DeviationProfile deviation_profile(const ModelParams& params, EquilibriumMode mode,
                                   double initial_dev, double end, int n_steps);

/// E[(Xbar_t - X^i_t)^2] given xbar_0 - x^i_0 = initial_dev. For the MFG mode
/// this is the N -> infinity limit of the finite-N expression.
double expected_sq_deviation(double t, double initial_dev, const ModelParams& params,
                             EquilibriumMode mode);

/// Time-0 expected cost of one bank under the equilibrium, by quadrature of
/// the running cost against E[(Xbar_t - X^i_t)^2]. MFG is again the N -> infinity
/// limit.
double value_time0(double initial_dev, const ModelParams& params, EquilibriumMode mode);

}  // namespace sysrisk
