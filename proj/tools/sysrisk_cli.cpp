// Command-line front end: `sysrisk run <experiment>` writes CSV data files,
// `sysrisk query <name>` prints one analytic quantity.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sysrisk/config.hpp"
#include "sysrisk/experiments.hpp"
#include "sysrisk/model.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitFailure = 1;

struct ParamFlags {
    std::map<std::string, std::optional<double>> values;

    void attach(CLI::App& app) {
        for (const char* name : {"n_banks", "a", "q", "epsilon", "c", "sigma", "rho", "horizon", "default_level"}) {
            app.add_option(std::string("--") + name, values[name], std::string("model parameter ") + name);
        }
    }

    sysrisk::ParamOverrides collect(const std::string& config_path) const {
        sysrisk::ParamOverrides out;
        if (!config_path.empty()) out = sysrisk::load_config(config_path);
        for (const auto& [key, v] : values) {
            if (v) out[key] = *v;
        }
        return out;
    }
};

bool is_validation(sysrisk::ErrorKind kind) {
    return kind == sysrisk::ErrorKind::DomainError || kind == sysrisk::ErrorKind::ConvexityViolated;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interbank lending game: equilibria, simulation and systemic risk"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(sysrisk::library_version()));

    std::string config_path;

    auto* run = app.add_subcommand("run", "run an experiment and write CSV files");
    std::string experiment;
    sysrisk::ExperimentSpec spec;
    std::string out_dir = ".";
    std::optional<double> dt;
    run->add_option("experiment", experiment, "experiment name")->required();
    run->add_option("--config", config_path, "JSON file with model parameters");
    run->add_option("--out-dir", out_dir, "output directory");
    run->add_option("--seed", spec.seed, "master seed");
    run->add_option("--dt", dt, "Euler time step (default 1e-4 * T)");
    run->add_option("--paths", spec.paths, "Monte Carlo paths");
    run->add_option("--dev", spec.initial_dev, "initial xbar - x^i (value-compare)");
    ParamFlags run_params;
    run_params.attach(*run);

    auto* q = app.add_subcommand("query", "print an analytic quantity");
    std::string query_name;
    sysrisk::QueryArgs qargs;
    std::string mode = "closed";
    q->add_option("name", query_name, "quantity name")->required();
    q->add_option("--config", config_path, "JSON file with model parameters");
    q->add_option("--t", qargs.t, "time");
    q->add_option("--dev", qargs.dev, "xbar - x^i");
    q->add_option("--mode", mode, "open | closed | mfg");
    ParamFlags query_params;
    query_params.attach(*q);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*run) {
            spec.name = experiment;
            spec.out_dir = out_dir;
            spec.dt = dt.value_or(0.0);
            spec.overrides = run_params.collect(config_path);
            const sysrisk::Manifest m = sysrisk::run_experiment(spec);
            for (const auto& f : m.files) std::cout << f.string() << '\n';
            std::cout << m.manifest_path.string() << '\n';
        } else if (*q) {
            qargs.mode = sysrisk::parse_mode(mode);
            const sysrisk::ModelParams params =
                sysrisk::apply_overrides(sysrisk::ModelParams{}, query_params.collect(config_path));
            std::cout << sysrisk::format_query_result(sysrisk::query(query_name, params, qargs)) << '\n';
        }
    } catch (const sysrisk::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return is_validation(e.kind()) ? kExitValidation : kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return 0;
}
