#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sysrisk/model.hpp"
#include "sysrisk/simulate.hpp"

namespace sysrisk {

/// Standard normal CDF. Phi(-x) = 1 - Phi(x) holds by construction.
double normal_cdf(double x);

/// log Phi(x), usable far below the underflow of Phi itself. For x < -8 it
/// switches to the asymptotic Mills-ratio series.
double log_normal_cdf(double x);

/// 2 Phi(D / (sigma sqrt T)): probability that one uncoupled bank defaults.
double single_default_prob(const ModelParams& params);

/// P(min_t Xbar_t <= D) = 2 Phi(D / (sigma sqrt T) * sqrt(N / (N rho^2 + 1 - rho^2))).
/// Does not depend on a or on the equilibrium controls.
double systemic_prob(const ModelParams& params);

/// log of systemic_prob, evaluated in log space.
double log_systemic_prob(const ModelParams& params);

/// N -> infinity limit: 2 Phi(D / (sigma |rho| sqrt T)), or 0 when rho == 0.
double systemic_prob_limit(const ModelParams& params);

/// D^2 / (2 sigma^2 T); throws CorrelationUnsupported unless rho == 0.
double large_deviation_rate(const ModelParams& params);

/// Binomial(n, p) pmf over k = 0..n, computed in log space.
std::vector<double> binomial_pmf(int n, double p);

/// Upper tail P(K >= k), k = 0..size-1, from a pmf or frequency vector.
std::vector<double> tail_mass(const std::vector<double>& pmf);

struct LossHistogram {
    std::vector<std::int64_t> counts;   // paths with exactly k defaults, k = 0..N
    std::int64_t n_paths = 0;
    ModelParams params;
    PolicySpec policy;
    std::uint64_t seed = 0;
    double dt = 0.0;
    std::optional<std::vector<double>> reference;  // Binomial(N, p) when banks are independent
    std::int64_t systemic_hits = 0;                // paths with min Xbar <= D

    struct PathSummary {
        int n_defaults = 0;
        bool mean_hit = false;
        double min_mean = 0.0;
    };
    std::vector<PathSummary> paths;

    std::vector<double> frequency() const;
    std::vector<double> tail_frequency() const { return tail_mass(frequency()); }
    double systemic_frequency() const { return static_cast<double>(systemic_hits) / n_paths; }
};

using NoiseSource = std::function<NoiseBundle(std::uint64_t seed, int n_banks, int n_steps, double dt)>;

/// Simulates n_paths ensembles from X_0 = 0 (path p uses path_seed(seed, p))
/// and tallies defaults per path. `dt <= 0` selects default_dt. A Binomial
/// reference is attached when banks are independent: Independent policy, or
/// Uncontrolled with a = 0, and rho = 0.
LossHistogram loss_distribution_mc(const ModelParams& params, PolicySpec policy, std::int64_t n_paths,
                                   std::uint64_t seed, double dt = 0.0,
                                   const NoiseSource& source = generate_noise);

}  // namespace sysrisk
