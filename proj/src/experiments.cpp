#include "sysrisk/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "sysrisk/csv.hpp"
#include "sysrisk/equilibrium.hpp"
#include "sysrisk/riccati.hpp"
#include "sysrisk/risk.hpp"
#include "sysrisk/rng.hpp"
#include "sysrisk/simulate.hpp"

#ifndef SYSRISK_VERSION
#define SYSRISK_VERSION "dev"
#endif

namespace sysrisk {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kCurveSteps = 1000;

std::string tag(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

struct Emitter {
    fs::path dir;
    std::vector<fs::path> files;

    void write(const std::string& name, const CsvTable& table) {
        const fs::path path = dir / name;
        write_csv(path, table);
        files.push_back(path);
    }
};

CsvTable path_table(const PathEnsemble& ens) {
    CsvTable t;
    t.header.push_back("t");
    for (int i = 0; i < ens.n_banks; ++i) t.header.push_back("x" + std::to_string(i + 1));
    t.header.push_back("mean");
    for (int k = 0; k < ens.grid.size(); ++k) {
        std::vector<double> row;
        row.reserve(ens.n_banks + 2);
        row.push_back(ens.grid.at(k));
        for (int i = 0; i < ens.n_banks; ++i) row.push_back(ens.path(i)[k]);
        row.push_back(ens.mean_path[k]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

void run_trajectories(const ModelParams& p, const ExperimentSpec& spec, double dt, Emitter& out) {
    const int n_steps = steps_for(p, dt);
    const NoiseBundle noise = generate_noise(path_seed(spec.seed, 0), p.n_banks, n_steps,
                                             p.horizon / n_steps);
    const std::vector<double> initial(p.n_banks, 0.0);
    out.write("trajectories_coupled.csv", path_table(euler_simulate(p, PolicySpec::uncontrolled(), initial, noise)));
    out.write("trajectories_independent.csv",
              path_table(euler_simulate(p, PolicySpec::independent(), initial, noise)));
    ModelParams correlated = p;
    correlated.rho = 0.5;
    out.write("trajectories_common_noise.csv",
              path_table(euler_simulate(validate(correlated), PolicySpec::uncontrolled(), initial, noise)));
}

void run_loss_dist(const ModelParams& base, const ExperimentSpec& spec, double dt, Emitter& out) {
    for (double a : {0.0, 10.0, 100.0}) {
        ModelParams p = base;
        p.a = a;
        validate(p);
        const LossHistogram hist = loss_distribution_mc(p, PolicySpec::uncontrolled(), spec.paths, spec.seed, dt);
        const std::vector<double> freq = hist.frequency();
        const std::vector<double> tail = hist.tail_frequency();
        std::vector<double> ref(p.n_banks + 1, kNaN);
        if (p.rho == 0.0) ref = binomial_pmf(p.n_banks, single_default_prob(p));
        const std::vector<double> ref_tail = tail_mass(ref);

        CsvTable t;
        t.header = {"k", "count", "frequency", "reference_pmf", "tail_frequency", "reference_tail"};
        for (int k = 0; k <= p.n_banks; ++k) {
            t.add_row({double(k), double(hist.counts[k]), freq[k], ref[k], tail[k], ref_tail[k]});
        }
        out.write("loss_a" + tag(a) + ".csv", t);

        CsvTable s;
        s.header = {"path_id", "n_defaults", "mean_hit", "min_mean"};
        for (std::size_t i = 0; i < hist.paths.size(); ++i) {
            const auto& ps = hist.paths[i];
            s.add_row({double(i), double(ps.n_defaults), ps.mean_hit ? 1.0 : 0.0, ps.min_mean});
        }
        out.write("summary_a" + tag(a) + ".csv", s);
    }
}

void run_common_noise(const ModelParams& base, Emitter& out) {
    const int sizes[] = {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 10000};
    for (double rho : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        CsvTable t;
        t.header = {"N", "analytic", "limit", "ld_rate"};
        for (int n : sizes) {
            ModelParams p = base;
            p.rho = rho;
            p.n_banks = n;
            validate(p);
            t.add_row({double(n), systemic_prob(p), systemic_prob_limit(p),
                       rho == 0.0 ? large_deviation_rate(p) : kNaN});
        }
        out.write("systemic_rho" + tag(rho) + ".csv", t);
    }
}

void run_riccati_compare(const ModelParams& base, Emitter& out) {
    for (double c : {0.0, 1.0}) {
        ModelParams p = base;
        p.c = c;
        validate(p);
        const RiccatiSolution phi = solve_riccati(p, EquilibriumMode::OpenLoop, kCurveSteps);
        const RiccatiSolution eta = solve_riccati(p, EquilibriumMode::ClosedLoop, kCurveSteps);
        CsvTable t;
        t.header = {"t", "phi", "eta"};
        for (int k = 0; k < phi.grid.size(); ++k) t.add_row({phi.grid.at(k), phi.values[k], eta.values[k]});
        out.write("riccati_c" + tag(c) + ".csv", t);

        for (auto mode : {EquilibriumMode::OpenLoop, EquilibriumMode::ClosedLoop, EquilibriumMode::MeanFieldGame}) {
            const RiccatiSolution sol = solve_riccati(p, mode, kCurveSteps);
            const double factor = control_factor(mode, p.n_banks);
            CsvTable g;
            g.header = {"t", "gain", "effective_rate"};
            for (int k = 0; k < sol.grid.size(); ++k) {
                const double gain = p.q + factor * sol.values[k];
                g.add_row({sol.grid.at(k), gain, p.a + gain});
            }
            out.write("rates_c" + tag(c) + "_" + std::string(to_string(mode)) + ".csv", g);
        }
    }
}

// Expected remaining cost E[V(t, X_t)] alongside E[(Xbar_t - X^i_t)^2],
// reported on every `stride`-th node of the deviation profile.
CsvTable value_profile(const ModelParams& p, EquilibriumMode mode, double initial_dev) {
    constexpr int n = 10000;
    constexpr int stride = 100;
    const DeviationProfile prof = deviation_profile(p, mode, initial_dev, p.horizon, n);
    const RiccatiCurve eta(p, mode);
    const double factor = control_factor(mode, p.n_banks);
    const double gap = p.epsilon - p.q * p.q;
    const double h = prof.grid.step();
    auto w = [&](int k) {
        const double e = eta(prof.grid.at(k));
        return 0.5 * (gap + factor * factor * e * e) * prof.expected_sq_dev[k];
    };
    std::vector<double> remaining(n + 1, 0.0);
    remaining[n] = 0.5 * p.c * prof.expected_sq_dev[n];
    for (int k = n; k >= 2; k -= 2) {
        remaining[k - 2] = remaining[k] + h / 3.0 * (w(k - 2) + 4.0 * w(k - 1) + w(k));
    }
    CsvTable t;
    t.header = {"t", "expected_sq_dev", "value"};
    for (int k = 0; k <= n; k += stride) t.add_row({prof.grid.at(k), prof.expected_sq_dev[k], remaining[k]});
    return t;
}

void run_value_compare(const ModelParams& base, const ExperimentSpec& spec, Emitter& out) {
    CsvTable t;
    t.header = {"N", "open_loop", "closed_loop", "mfg"};
    const double mfg = value_time0(spec.initial_dev, base, EquilibriumMode::MeanFieldGame);
    for (int n = 2; n <= 100; ++n) {
        ModelParams p = base;
        p.n_banks = n;
        t.add_row({double(n), value_time0(spec.initial_dev, p, EquilibriumMode::OpenLoop),
                   value_time0(spec.initial_dev, p, EquilibriumMode::ClosedLoop), mfg});
    }
    out.write("value_vs_N.csv", t);
    for (auto mode : {EquilibriumMode::OpenLoop, EquilibriumMode::ClosedLoop, EquilibriumMode::MeanFieldGame}) {
        out.write("value_profile_" + std::string(to_string(mode)) + ".csv",
                  value_profile(base, mode, spec.initial_dev));
    }
}

void run_eta_horizon(const ModelParams& base, Emitter& out) {
    for (double horizon : {1.0, 100.0}) {
        ModelParams p = base;
        p.horizon = horizon;
        validate(p);
        const RiccatiSolution sol = solve_riccati(p, EquilibriumMode::MeanFieldGame, kCurveSteps);
        const double bar = p.c == 0.0 ? eta_limit(p, EquilibriumMode::MeanFieldGame) : kNaN;
        CsvTable t;
        t.header = {"t", "eta", "eta_bar"};
        for (int k = 0; k < sol.grid.size(); ++k) t.add_row({sol.grid.at(k), sol.values[k], bar});
        out.write("eta_T" + tag(horizon) + ".csv", t);
    }
}

void run_effective_rate_scan(const ModelParams& base, Emitter& out) {
    CsvTable t;
    t.header = {"N", "open_loop", "closed_loop", "mfg"};
    const double mfg = effective_rate_limit(base, EquilibriumMode::MeanFieldGame);
    for (int n = 2; n <= 200; ++n) {
        ModelParams p = base;
        p.n_banks = n;
        t.add_row({double(n), effective_rate_limit(p, EquilibriumMode::OpenLoop),
                   effective_rate_limit(p, EquilibriumMode::ClosedLoop), mfg});
    }
    out.write("effective_rate_scan.csv", t);
}

nlohmann::json params_json(const ModelParams& p) {
    return {{"n_banks", p.n_banks}, {"a", p.a},         {"q", p.q},
            {"epsilon", p.epsilon}, {"c", p.c},         {"sigma", p.sigma},
            {"rho", p.rho},         {"horizon", p.horizon}, {"default_level", p.default_level}};
}

}  // namespace

std::string_view library_version() { return SYSRISK_VERSION; }

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {"trajectories",   "loss-dist",   "common-noise",
                                                   "riccati-compare", "value-compare", "eta-horizon",
                                                   "effective-rate-scan"};
    return names;
}

ModelParams experiment_defaults(std::string_view name) {
    ModelParams p;  // N=10, a=1, q=1, eps=10, c=0, sigma=1, rho=0, T=1, D=-0.7
    if (name == "trajectories") {
        p.a = 10.0;
    } else if (name == "loss-dist" || name == "common-noise" || name == "riccati-compare" ||
               name == "effective-rate-scan") {
    } else if (name == "value-compare") {
        p.rho = 0.2;
        p.c = 10.0;
    } else if (name == "eta-horizon") {
        p.epsilon = 2.0;
    } else {
        throw Error(ErrorKind::UnknownExperiment, "unknown experiment '" + std::string(name) + "'");
    }
    return p;
}

Manifest run_experiment(const ExperimentSpec& spec) {
    const ModelParams params = validate(apply_overrides(experiment_defaults(spec.name), spec.overrides));
    if (spec.paths < 1) throw Error(ErrorKind::DomainError, "paths must be >= 1", "paths");
    const double dt = spec.dt > 0.0 ? spec.dt : default_dt(params);

    fs::create_directories(spec.out_dir);
    Emitter out{spec.out_dir, {}};
    if (spec.name == "trajectories") {
        run_trajectories(params, spec, dt, out);
    } else if (spec.name == "loss-dist") {
        run_loss_dist(params, spec, dt, out);
    } else if (spec.name == "common-noise") {
        run_common_noise(params, out);
    } else if (spec.name == "riccati-compare") {
        run_riccati_compare(params, out);
    } else if (spec.name == "value-compare") {
        run_value_compare(params, spec, out);
    } else if (spec.name == "eta-horizon") {
        run_eta_horizon(params, out);
    } else if (spec.name == "effective-rate-scan") {
        run_effective_rate_scan(params, out);
    }

    nlohmann::json doc;
    doc["experiment"] = spec.name;
    doc["version"] = std::string(library_version());
    doc["seed"] = spec.seed;
    doc["dt"] = dt;
    doc["paths"] = spec.paths;
    doc["initial_dev"] = spec.initial_dev;
    doc["params"] = params_json(params);
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : out.files) {
        files.push_back({{"name", f.filename().string()}, {"fnv1a64", file_digest(f)}});
    }
    doc["files"] = files;

    Manifest m;
    m.manifest_path = spec.out_dir / "manifest.json";
    m.files = out.files;
    std::ofstream(m.manifest_path, std::ios::binary | std::ios::trunc) << doc.dump(2) << '\n';
    return m;
}

const std::vector<std::string>& query_names() {
    static const std::vector<std::string> names = {"p",   "systemic-prob", "systemic-limit", "ld-rate",
                                                   "eta", "eta-bar",       "mu",             "gain",
                                                   "A",   "A-bar",         "value"};
    return names;
}

double query(std::string_view name, const ModelParams& raw, const QueryArgs& args) {
    const ModelParams p = validate(raw);
    if (name == "p") return single_default_prob(p);
    if (name == "systemic-prob") return systemic_prob(p);
    if (name == "systemic-limit") return systemic_prob_limit(p);
    if (name == "ld-rate") return large_deviation_rate(p);
    if (name == "eta") return eta_closed_form(args.t, p, args.mode);
    if (name == "eta-bar") return eta_limit(p, args.mode);
    if (name == "mu") return mu(args.t, p, args.mode);
    if (name == "gain") return control_gain(args.t, p, args.mode);
    if (name == "A") return effective_rate(args.t, p, args.mode);
    if (name == "A-bar") return effective_rate_limit(p, args.mode);
    if (name == "value") {
        // The open loop has no quadratic ansatz; its time-0 value comes from quadrature.
        if (args.mode == EquilibriumMode::OpenLoop && args.t == 0.0) return value_time0(args.dev, p, args.mode);
        return value_function(args.t, args.dev, p, args.mode);
    }
    throw Error(ErrorKind::UnknownQuery, "unknown query '" + std::string(name) + "'");
}

std::string format_query_result(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

}  // namespace sysrisk
