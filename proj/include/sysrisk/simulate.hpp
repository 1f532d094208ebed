#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sysrisk/grid.hpp"
#include "sysrisk/model.hpp"

namespace sysrisk {

/// Brownian increments for one ensemble. Stream 0 is the common noise W^0,
/// stream i (1..N) drives bank i. Every entry is N(0, dt).
struct NoiseBundle {
    std::uint64_t seed = 0;
    int n_steps = 0;
    int n_banks = 0;
    double dt = 0.0;
    std::vector<double> common;  // [n_steps]
    std::vector<double> idio;    // [n_banks * n_steps], bank-major

    std::span<const double> bank(int i) const {
        return {idio.data() + static_cast<std::size_t>(i) * n_steps, static_cast<std::size_t>(n_steps)};
    }
};

NoiseBundle generate_noise(std::uint64_t seed, int n_banks, int n_steps, double dt);

/// All-zero increments with the given shape (sigma -> 0 experiments).
NoiseBundle zero_noise(int n_banks, int n_steps, double dt);

struct PolicySpec {
    enum class Kind { Uncontrolled, Equilibrium, Independent };

    Kind kind = Kind::Uncontrolled;
    EquilibriumMode mode = EquilibriumMode::ClosedLoop;  // used by Equilibrium only

    static PolicySpec uncontrolled() { return {Kind::Uncontrolled, EquilibriumMode::ClosedLoop}; }
    static PolicySpec independent() { return {Kind::Independent, EquilibriumMode::ClosedLoop}; }
    static PolicySpec equilibrium(EquilibriumMode m) { return {Kind::Equilibrium, m}; }

    /// uncontrolled | independent | equilibrium-open | equilibrium-closed | equilibrium-mfg
    std::string name() const;
    static PolicySpec parse(std::string_view name);

    bool operator==(const PolicySpec&) const = default;
};

struct PathEnsemble {
    TimeGrid grid;
    int n_banks = 0;
    std::vector<double> states;     // [n_banks * (n_steps + 1)], bank-major
    std::vector<double> mean_path;  // [n_steps + 1]
    PolicySpec policy;
    ModelParams params;
    std::uint64_t noise_seed = 0;
    /// kappa(t_k), k = 0..n_steps-1, for equilibrium ensembles; null otherwise.
    std::shared_ptr<const std::vector<double>> gains;

    std::span<const double> path(int i) const {
        const auto len = static_cast<std::size_t>(grid.size());
        return {states.data() + static_cast<std::size_t>(i) * len, len};
    }
};

/// Explicit Euler scheme for
///   dX^i = [a (Xbar - X^i) + alpha^i] dt + sigma (sqrt(1-rho^2) dW^i + rho dW^0).
/// The per-step coupling rate (a, 0, or a + kappa_k) is tabulated once at
/// construction, so one simulator can run many paths.
class EulerSimulator {
public:
    EulerSimulator(const ModelParams& params, PolicySpec policy, int n_steps);

    PathEnsemble run(std::span<const double> initial, const NoiseBundle& noise) const;

    const TimeGrid& grid() const { return grid_; }

private:
    ModelParams params_;
    PolicySpec policy_;
    TimeGrid grid_;
    std::vector<double> coupling_;
    std::shared_ptr<const std::vector<double>> gains_;
};

/// Number of Euler steps on [0, T] for a requested step (the step is shrunk to divide T).
int steps_for(const ModelParams& params, double dt);

/// 1e-4 * T.
double default_dt(const ModelParams& params);

PathEnsemble euler_simulate(const ModelParams& params, PolicySpec policy,
                            std::span<const double> initial, const NoiseBundle& noise);

enum class ExactScheme {
    /// I_{k+1} = e^{-a dt} I_k + e^{-a dt / 2} dW_k using the supplied increments.
    EulerConsistent,
    /// Joint Gaussian transition: the convolution increment has variance
    /// (1 - e^{-2 a dt}) / (2a) and its exact covariance with dW_k; the
    /// residual is drawn from auxiliary streams N+1..2N of the bundle's seed.
    ExactVariance,
};

/// Uncontrolled dynamics from X_0 = 0 via the explicit solution
///   X^i = sigma rho W^0 + sigma sqrt(1-rho^2) (Wbar + I^i - Ibar),
///   I^j_t = int_0^t e^{a(s-t)} dW^j_s.
PathEnsemble exact_ou_simulate(const ModelParams& params, std::span<const double> initial,
                               const NoiseBundle& noise, ExactScheme scheme);

struct DefaultSummary {
    std::vector<bool> defaulted;  // per bank
    int n_defaults = 0;
    bool mean_hit = false;
    double min_mean = 0.0;
};

/// Discretely monitored first passage to `default_level` (inclusive).
DefaultSummary first_passage(const PathEnsemble& ensemble, double default_level);

/// Left-endpoint Riemann sum of the running cost along bank `bank`'s path plus
/// the terminal penalty. Requires an equilibrium ensemble.
double realized_cost(const PathEnsemble& ensemble, int bank, const ModelParams& params);

/// Runs fn(i) for i in [0, n) on worker threads. fn must only write to slot i
/// of its own output so that results do not depend on scheduling.
void for_each_path(std::int64_t n, const std::function<void(std::int64_t)>& fn);

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;
};

/// Mean realized cost under the equilibrium from X_0 = 0. Each path contributes
/// the average of its N bank costs as one sample.
MonteCarloEstimate equilibrium_cost_mc(const ModelParams& params, EquilibriumMode mode,
                                       std::int64_t n_paths, std::uint64_t master_seed, double dt);

}  // namespace sysrisk
