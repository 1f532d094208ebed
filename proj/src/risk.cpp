#include "sysrisk/risk.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sysrisk/rng.hpp"

namespace sysrisk {

double normal_cdf(double x) {
    if (std::isnan(x)) return x;
    if (x > 0.0) return 1.0 - normal_cdf(-x);
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double log_normal_cdf(double x) {
    if (x >= -8.0) {
        if (x > 0.0) return std::log1p(-normal_cdf(-x));
        return std::log(normal_cdf(x));
    }
    // Phi(x) = phi(x) / |x| * (1 - 1/x^2 + 3/x^4 - 15/x^6 + ...), truncated at
    // the smallest term of the asymptotic series.
    const double inv_x2 = 1.0 / (x * x);
    double term = 1.0;
    double series = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double next = -term * (2.0 * k - 1.0) * inv_x2;
        if (std::abs(next) >= std::abs(term) || std::abs(next) < 1e-17) break;
        series += next;
        term = next;
    }
    return -0.5 * x * x - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

double single_default_prob(const ModelParams& p) {
    return 2.0 * normal_cdf(p.default_level / (p.sigma * std::sqrt(p.horizon)));
}

namespace {

double systemic_argument(const ModelParams& p) {
    const double n = p.n_banks;
    const double rho2 = p.rho * p.rho;
    return p.default_level / (p.sigma * std::sqrt(p.horizon)) * std::sqrt(n / (n * rho2 + (1.0 - rho2)));
}

}  // namespace

double systemic_prob(const ModelParams& p) { return 2.0 * normal_cdf(systemic_argument(p)); }

double log_systemic_prob(const ModelParams& p) {
    return std::numbers::ln2 + log_normal_cdf(systemic_argument(p));
}

double systemic_prob_limit(const ModelParams& p) {
    if (p.rho == 0.0) return 0.0;
    return 2.0 * normal_cdf(p.default_level / (p.sigma * std::abs(p.rho) * std::sqrt(p.horizon)));
}

double large_deviation_rate(const ModelParams& p) {
    if (p.rho != 0.0) {
        throw Error(ErrorKind::CorrelationUnsupported, "large-deviation rate is derived for rho = 0", "rho");
    }
    return p.default_level * p.default_level / (2.0 * p.sigma * p.sigma * p.horizon);
}

std::vector<double> binomial_pmf(int n, double p) {
    std::vector<double> pmf(n + 1, 0.0);
    if (p <= 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (p >= 1.0) {
        pmf[n] = 1.0;
        return pmf;
    }
    std::vector<double> log_fact(n + 1, 0.0);
    for (int k = 1; k <= n; ++k) log_fact[k] = log_fact[k - 1] + std::log(static_cast<double>(k));
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    for (int k = 0; k <= n; ++k) {
        pmf[k] = std::exp(log_fact[n] - log_fact[k] - log_fact[n - k] + k * lp + (n - k) * lq);
    }
    return pmf;
}

std::vector<double> tail_mass(const std::vector<double>& pmf) {
    std::vector<double> tail(pmf.size(), 0.0);
    double acc = 0.0;
    for (std::size_t k = pmf.size(); k-- > 0;) {
        acc += pmf[k];
        tail[k] = acc;
    }
    return tail;
}

std::vector<double> LossHistogram::frequency() const {
    std::vector<double> f(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k) f[k] = static_cast<double>(counts[k]) / n_paths;
    return f;
}

LossHistogram loss_distribution_mc(const ModelParams& params, PolicySpec policy, std::int64_t n_paths,
                                   std::uint64_t seed, double dt, const NoiseSource& source) {
    validate(params);
    if (n_paths < 1) throw Error(ErrorKind::DomainError, "n_paths must be >= 1", "paths");
    if (!(dt > 0.0)) dt = default_dt(params);

    const int n_steps = steps_for(params, dt);
    const EulerSimulator sim(params, policy, n_steps);
    const std::vector<double> initial(params.n_banks, 0.0);

    LossHistogram hist;
    hist.n_paths = n_paths;
    hist.params = params;
    hist.policy = policy;
    hist.seed = seed;
    hist.dt = sim.grid().step();
    hist.paths.resize(n_paths);

    for_each_path(n_paths, [&](std::int64_t p) {
        const NoiseBundle noise = source(path_seed(seed, p), params.n_banks, n_steps, sim.grid().step());
        const PathEnsemble ens = sim.run(initial, noise);
        const DefaultSummary fp = first_passage(ens, params.default_level);
        hist.paths[p] = {fp.n_defaults, fp.mean_hit, fp.min_mean};
    });

    hist.counts.assign(params.n_banks + 1, 0);
    for (const auto& s : hist.paths) {
        ++hist.counts[s.n_defaults];
        if (s.mean_hit) ++hist.systemic_hits;
    }

    const bool independent_banks =
        policy.kind == PolicySpec::Kind::Independent ||
        (policy.kind == PolicySpec::Kind::Uncontrolled && params.a == 0.0);
    if (independent_banks && params.rho == 0.0) {
        hist.reference = binomial_pmf(params.n_banks, single_default_prob(params));
    }
    return hist;
}

}  // namespace sysrisk
