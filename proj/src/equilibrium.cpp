#include "sysrisk/equilibrium.hpp"

#include <cmath>
#include <string>

#include "sysrisk/riccati.hpp"

namespace sysrisk {

namespace {

constexpr int kProfileSteps = 10000;

// Noise loading on d(Xbar - X^i): (1 - 1/N) sigma^2 (1 - rho^2), with the
// finite-N factor dropped in the mean-field limit.
double deviation_noise(const ModelParams& p, EquilibriumMode mode) {
    return control_factor(mode, p.n_banks) * p.sigma * p.sigma * (1.0 - p.rho * p.rho);
}

int even_steps(double length, double horizon) {
    int n = static_cast<int>(std::ceil(length / horizon * kProfileSteps - 1e-9));
    if (n < 2) n = 2;
    if (n % 2 != 0) ++n;
    return n;
}

}  // namespace

double control_factor(EquilibriumMode mode, int n_banks) {
    return mode == EquilibriumMode::MeanFieldGame ? 1.0 : 1.0 - 1.0 / n_banks;
}

double control_gain(double t, const ModelParams& params, EquilibriumMode mode) {
    return params.q + control_factor(mode, params.n_banks) * eta_closed_form(t, params, mode);
}

double effective_rate(double t, const ModelParams& params, EquilibriumMode mode) {
    return params.a + control_gain(t, params, mode);
}

double effective_rate_limit(const ModelParams& params, EquilibriumMode mode) {
    return params.a + params.q + control_factor(mode, params.n_banks) * eta_limit(params, mode);
}

double value_function(double t, double mean_dev, const ModelParams& params, EquilibriumMode mode) {
    if (mode == EquilibriumMode::OpenLoop) {
        throw Error(ErrorKind::UnsupportedMode,
                    "the quadratic value ansatz exists for closed-loop and MFG only", "mode");
    }
    return 0.5 * eta_closed_form(t, params, mode) * mean_dev * mean_dev + mu(t, params, mode);
}

DeviationProfile deviation_profile(const ModelParams& params, EquilibriumMode mode,
                                   double initial_dev, double end, int n_steps) {
    if (!(end >= 0.0 && end <= params.horizon)) {
        throw Error(ErrorKind::DomainError, "t = " + std::to_string(end) + " outside [0, T]", "t");
    }
    if (n_steps < 2) n_steps = 2;
    if (n_steps % 2 != 0) ++n_steps;

    DeviationProfile out;
    out.grid = TimeGrid{0.0, end, n_steps};
    out.expected_sq_dev.assign(n_steps + 1, initial_dev * initial_dev);
    if (end == 0.0) return out;

    const RiccatiCurve eta(params, mode);
    const double base = params.a + params.q;
    const double factor = control_factor(mode, params.n_banks);
    auto rate = [&](double s) { return base + factor * eta(s); };
    const double noise = deviation_noise(params, mode);
    const double h = out.grid.step();

    // Per step: Lambda(t_{k+1}) - Lambda(t_k) and Lambda(t_{k+1}) - Lambda(mid)
    // by three-point Simpson, then
    //   E_{k+1} = e^{-2 dL} E_k + noise * int_{t_k}^{t_{k+1}} e^{-2 (Lambda(t_{k+1}) - Lambda(s))} ds.
    double r_left = rate(0.0);
    double e = initial_dev * initial_dev;
    for (int k = 0; k < n_steps; ++k) {
        const double t0 = out.grid.at(k);
        const double t1 = out.grid.at(k + 1);
        const double tm = 0.5 * (t0 + t1);
        const double r_mid = rate(tm);
        const double r_right = rate(t1);
        const double r_q3 = rate(0.5 * (tm + t1));
        const double full = h / 6.0 * (r_left + 4.0 * r_mid + r_right);
        const double upper_half = 0.5 * h / 6.0 * (r_mid + 4.0 * r_q3 + r_right);
        const double w_left = std::exp(-2.0 * full);
        const double w_mid = std::exp(-2.0 * upper_half);
        const double conv = h / 6.0 * (w_left + 4.0 * w_mid + 1.0);
        e = w_left * e + noise * conv;
        out.expected_sq_dev[k + 1] = e;
        r_left = r_right;
    }
    return out;
}

double expected_sq_deviation(double t, double initial_dev, const ModelParams& params,
                             EquilibriumMode mode) {
    if (t == 0.0) return initial_dev * initial_dev;
    const DeviationProfile prof =
        deviation_profile(params, mode, initial_dev, t, even_steps(t, params.horizon));
    return prof.expected_sq_dev.back();
}

double value_time0(double initial_dev, const ModelParams& params, EquilibriumMode mode) {
    const DeviationProfile prof =
        deviation_profile(params, mode, initial_dev, params.horizon, kProfileSteps);
    const RiccatiCurve eta(params, mode);
    const double factor = control_factor(mode, params.n_banks);
    const double gap = params.epsilon - params.q * params.q;

    const int n = prof.grid.n_steps;
    const double h = prof.grid.step();
    auto integrand = [&](int k) {
        const double et = eta(prof.grid.at(k));
        return (gap + factor * factor * et * et) * prof.expected_sq_dev[k];
    };
    double odd = 0.0;
    double even = 0.0;
    for (int k = 1; k < n; ++k) {
        if (k % 2 == 1) odd += integrand(k); else even += integrand(k);
    }
    const double running = h / 3.0 * (integrand(0) + 4.0 * odd + 2.0 * even + integrand(n));
    return 0.5 * running + 0.5 * params.c * prof.expected_sq_dev[n];
}

}  // namespace sysrisk
