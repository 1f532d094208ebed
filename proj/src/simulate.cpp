#include "sysrisk/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "sysrisk/equilibrium.hpp"
#include "sysrisk/riccati.hpp"
#include "sysrisk/rng.hpp"

namespace sysrisk {

NoiseBundle generate_noise(std::uint64_t seed, int n_banks, int n_steps, double dt) {
    if (n_steps < 1 || n_banks < 1 || !(dt > 0.0)) {
        throw Error(ErrorKind::DomainError, "noise needs n_steps >= 1, n_banks >= 1, dt > 0", "dt");
    }
    NoiseBundle nb;
    nb.seed = seed;
    nb.n_steps = n_steps;
    nb.n_banks = n_banks;
    nb.dt = dt;
    nb.common.resize(n_steps);
    nb.idio.resize(static_cast<std::size_t>(n_banks) * n_steps);
    const double scale = std::sqrt(dt);
    fill_normals(seed, 0, scale, nb.common);
    for (int i = 0; i < n_banks; ++i) {
        fill_normals(seed, static_cast<std::uint64_t>(i) + 1, scale,
                     std::span<double>(nb.idio.data() + static_cast<std::size_t>(i) * n_steps, n_steps));
    }
    return nb;
}

NoiseBundle zero_noise(int n_banks, int n_steps, double dt) {
    NoiseBundle nb;
    nb.n_steps = n_steps;
    nb.n_banks = n_banks;
    nb.dt = dt;
    nb.common.assign(n_steps, 0.0);
    nb.idio.assign(static_cast<std::size_t>(n_banks) * n_steps, 0.0);
    return nb;
}

std::string PolicySpec::name() const {
    switch (kind) {
        case Kind::Uncontrolled: return "uncontrolled";
        case Kind::Independent: return "independent";
        case Kind::Equilibrium:
            switch (mode) {
                case EquilibriumMode::OpenLoop: return "equilibrium-open";
                case EquilibriumMode::ClosedLoop: return "equilibrium-closed";
                case EquilibriumMode::MeanFieldGame: return "equilibrium-mfg";
            }
    }
    return "unknown";
}

PolicySpec PolicySpec::parse(std::string_view name) {
    if (name == "uncontrolled") return uncontrolled();
    if (name == "independent") return independent();
    if (name == "equilibrium-open") return equilibrium(EquilibriumMode::OpenLoop);
    if (name == "equilibrium-closed") return equilibrium(EquilibriumMode::ClosedLoop);
    if (name == "equilibrium-mfg") return equilibrium(EquilibriumMode::MeanFieldGame);
    throw Error(ErrorKind::DomainError, "unknown policy '" + std::string(name) + "'", "policy");
}

int steps_for(const ModelParams& params, double dt) {
    return TimeGrid::with_max_step(0.0, params.horizon, dt).n_steps;
}

double default_dt(const ModelParams& params) { return 1e-4 * params.horizon; }

EulerSimulator::EulerSimulator(const ModelParams& params, PolicySpec policy, int n_steps)
    : params_(params), policy_(policy), grid_{0.0, params.horizon, n_steps} {
    switch (policy.kind) {
        case PolicySpec::Kind::Uncontrolled:
            coupling_.assign(n_steps, params.a);
            break;
        case PolicySpec::Kind::Independent:
            coupling_.assign(n_steps, 0.0);
            break;
        case PolicySpec::Kind::Equilibrium: {
            const RiccatiCurve eta(params, policy.mode);
            const double factor = control_factor(policy.mode, params.n_banks);
            auto gains = std::make_shared<std::vector<double>>(n_steps);
            coupling_.resize(n_steps);
            for (int k = 0; k < n_steps; ++k) {
                (*gains)[k] = params.q + factor * eta(grid_.at(k));
                coupling_[k] = params.a + (*gains)[k];
            }
            gains_ = std::move(gains);
            break;
        }
    }
}

PathEnsemble EulerSimulator::run(std::span<const double> initial, const NoiseBundle& noise) const {
    const int n_banks = params_.n_banks;
    const int n = grid_.n_steps;
    if (static_cast<int>(initial.size()) != n_banks || noise.n_banks != n_banks ||
        noise.n_steps != n || std::abs(noise.dt - grid_.step()) > 1e-12 * grid_.step() + 1e-15) {
        throw Error(ErrorKind::DimensionMismatch,
                    "initial values, noise and time grid must agree on N and n_steps");
    }

    PathEnsemble ens;
    ens.grid = grid_;
    ens.n_banks = n_banks;
    ens.policy = policy_;
    ens.params = params_;
    ens.noise_seed = noise.seed;
    ens.gains = gains_;
    const std::size_t len = static_cast<std::size_t>(n) + 1;
    ens.states.resize(static_cast<std::size_t>(n_banks) * len);
    ens.mean_path.resize(len);

    const double dt = grid_.step();
    const double idio_load = params_.sigma * std::sqrt(1.0 - params_.rho * params_.rho);
    const double common_load = params_.sigma * params_.rho;
    const double inv_n = 1.0 / n_banks;

    std::vector<double> x(initial.begin(), initial.end());
    auto mean_of = [&] {
        double s = 0.0;
        for (double v : x) s += v;
        return s * inv_n;
    };
    for (int i = 0; i < n_banks; ++i) ens.states[i * len] = x[i];
    double xbar = mean_of();
    ens.mean_path[0] = xbar;

    for (int k = 0; k < n; ++k) {
        const double drift_rate = coupling_[k] * dt;
        const double shock = common_load * noise.common[k];
        for (int i = 0; i < n_banks; ++i) {
            x[i] += drift_rate * (xbar - x[i]) + idio_load * noise.idio[static_cast<std::size_t>(i) * n + k] + shock;
            ens.states[i * len + k + 1] = x[i];
        }
        xbar = mean_of();
        ens.mean_path[k + 1] = xbar;
    }
    return ens;
}

PathEnsemble euler_simulate(const ModelParams& params, PolicySpec policy,
                            std::span<const double> initial, const NoiseBundle& noise) {
    if (noise.n_steps < 1 || steps_for(params, noise.dt) != noise.n_steps) {
        throw Error(ErrorKind::DimensionMismatch, "noise time grid does not cover [0, T]");
    }
    return EulerSimulator(params, policy, noise.n_steps).run(initial, noise);
}

PathEnsemble exact_ou_simulate(const ModelParams& params, std::span<const double> initial,
                               const NoiseBundle& noise, ExactScheme scheme) {
    const int n_banks = params.n_banks;
    if (static_cast<int>(initial.size()) != n_banks || noise.n_banks != n_banks || noise.n_steps < 1 ||
        steps_for(params, noise.dt) != noise.n_steps) {
        throw Error(ErrorKind::DimensionMismatch, "initial values and noise must match N and [0, T]");
    }
    for (double v : initial) {
        if (v != 0.0) throw Error(ErrorKind::NonzeroInitial, "explicit solution assumes X_0 = 0");
    }

    const int n = noise.n_steps;
    const double dt = noise.dt;
    const double a = params.a;
    const double decay = std::exp(-a * dt);
    // a -> 0 limits of the moments are dt, handled by expm1
    const double var_conv = (a == 0.0) ? dt : -std::expm1(-2.0 * a * dt) / (2.0 * a);
    const double cov_conv = (a == 0.0) ? dt : -std::expm1(-a * dt) / a;
    const double regress = cov_conv / dt;
    const double resid_sd = std::sqrt(std::max(0.0, var_conv - cov_conv * cov_conv / dt));
    const double half_decay = std::exp(-0.5 * a * dt);

    PathEnsemble ens;
    ens.grid = TimeGrid{0.0, params.horizon, n};
    ens.n_banks = n_banks;
    ens.policy = PolicySpec::uncontrolled();
    ens.params = params;
    ens.noise_seed = noise.seed;
    const std::size_t len = static_cast<std::size_t>(n) + 1;
    ens.states.assign(static_cast<std::size_t>(n_banks) * len, 0.0);
    ens.mean_path.assign(len, 0.0);

    // Per bank: W^j and I^j on the grid, stored in the state rows for now.
    std::vector<double> brownian(static_cast<std::size_t>(n_banks) * len, 0.0);
    std::vector<double> aux(scheme == ExactScheme::ExactVariance ? n : 0);
    for (int j = 0; j < n_banks; ++j) {
        const auto dw = noise.bank(j);
        if (scheme == ExactScheme::ExactVariance) {
            fill_normals(noise.seed, static_cast<std::uint64_t>(n_banks) + 1 + j, 1.0, aux);
        }
        double w = 0.0;
        double conv = 0.0;
        double* conv_row = ens.states.data() + j * len;
        double* w_row = brownian.data() + j * len;
        for (int k = 0; k < n; ++k) {
            w += dw[k];
            const double innovation = scheme == ExactScheme::EulerConsistent
                                          ? half_decay * dw[k]
                                          : regress * dw[k] + resid_sd * aux[k];
            conv = decay * conv + innovation;
            w_row[k + 1] = w;
            conv_row[k + 1] = conv;
        }
    }

    const double idio_load = params.sigma * std::sqrt(1.0 - params.rho * params.rho);
    const double common_load = params.sigma * params.rho;
    const double inv_n = 1.0 / n_banks;
    double w0 = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        if (k > 0) w0 += noise.common[k - 1];
        double wbar = 0.0;
        double ibar = 0.0;
        for (int j = 0; j < n_banks; ++j) {
            wbar += brownian[j * len + k];
            ibar += ens.states[j * len + k];
        }
        wbar *= inv_n;
        ibar *= inv_n;
        double sum = 0.0;
        for (int j = 0; j < n_banks; ++j) {
            double& cell = ens.states[j * len + k];
            cell = common_load * w0 + idio_load * (wbar + cell - ibar);
            sum += cell;
        }
        ens.mean_path[k] = sum * inv_n;
    }
    return ens;
}

DefaultSummary first_passage(const PathEnsemble& ensemble, double default_level) {
    DefaultSummary out;
    out.defaulted.assign(ensemble.n_banks, false);
    for (int i = 0; i < ensemble.n_banks; ++i) {
        const auto path = ensemble.path(i);
        const double lowest = *std::min_element(path.begin(), path.end());
        if (lowest <= default_level) {
            out.defaulted[i] = true;
            ++out.n_defaults;
        }
    }
    out.min_mean = *std::min_element(ensemble.mean_path.begin(), ensemble.mean_path.end());
    out.mean_hit = out.min_mean <= default_level;
    return out;
}

double realized_cost(const PathEnsemble& ensemble, int bank, const ModelParams& params) {
    if (ensemble.policy.kind != PolicySpec::Kind::Equilibrium || !ensemble.gains) {
        throw Error(ErrorKind::PolicyMismatch, "realized cost needs an equilibrium ensemble", "policy");
    }
    if (bank < 0 || bank >= ensemble.n_banks) {
        throw Error(ErrorKind::DomainError, "bank index out of range", "bank");
    }
    const auto path = ensemble.path(bank);
    const auto& gains = *ensemble.gains;
    const int n = ensemble.grid.n_steps;
    const double dt = ensemble.grid.step();
    double running = 0.0;
    for (int k = 0; k < n; ++k) {
        const double dev = ensemble.mean_path[k] - path[k];
        const double alpha = gains[k] * dev;
        running += 0.5 * alpha * alpha - params.q * alpha * dev + 0.5 * params.epsilon * dev * dev;
    }
    const double last = ensemble.mean_path[n] - path[n];
    return running * dt + 0.5 * params.c * last * last;
}

void for_each_path(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const auto workers = static_cast<std::int64_t>(std::min<std::int64_t>(hw, std::max<std::int64_t>(n, 1)));
    if (workers <= 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::int64_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::int64_t i = w; i < n; i += workers) fn(i);
        });
    }
}

MonteCarloEstimate equilibrium_cost_mc(const ModelParams& params, EquilibriumMode mode,
                                       std::int64_t n_paths, std::uint64_t master_seed, double dt) {
    const int n_steps = steps_for(params, dt);
    const EulerSimulator sim(params, PolicySpec::equilibrium(mode), n_steps);
    const std::vector<double> initial(params.n_banks, 0.0);
    std::vector<double> samples(n_paths);
    for_each_path(n_paths, [&](std::int64_t p) {
        const NoiseBundle noise =
            generate_noise(path_seed(master_seed, p), params.n_banks, n_steps, sim.grid().step());
        const PathEnsemble ens = sim.run(initial, noise);
        double total = 0.0;
        for (int i = 0; i < params.n_banks; ++i) total += realized_cost(ens, i, params);
        samples[p] = total / params.n_banks;
    });

    MonteCarloEstimate est;
    est.n_samples = n_paths;
    double sum = 0.0;
    for (double s : samples) sum += s;
    est.mean = sum / n_paths;
    double ss = 0.0;
    for (double s : samples) ss += (s - est.mean) * (s - est.mean);
    const double var = n_paths > 1 ? ss / (n_paths - 1) : 0.0;
    est.std_error = std::sqrt(var / n_paths);
    return est;
}

}  // namespace sysrisk
