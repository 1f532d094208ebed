#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sysrisk/config.hpp"
#include "sysrisk/model.hpp"

namespace sysrisk {

/// One experiment run. Each experiment starts from its own baseline
/// parameters (see experiment_defaults) and applies `overrides` on top; the
/// quantity an experiment sweeps (a, c, T or N) is set per output file.
struct ExperimentSpec {
    std::string name;
    ParamOverrides overrides;
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 0;
    double dt = 0.0;             // <= 0: 1e-4 * T
    std::int64_t paths = 10000;
    double initial_dev = 0.0;    // value-compare only
};

struct Manifest {
    std::filesystem::path manifest_path;
    std::vector<std::filesystem::path> files;  // data files, in emission order
};

const std::vector<std::string>& experiment_names();

/// Baseline parameters of an experiment; throws UnknownExperiment.
ModelParams experiment_defaults(std::string_view name);

/// Writes the experiment's CSV files plus manifest.json into spec.out_dir.
Manifest run_experiment(const ExperimentSpec& spec);

struct QueryArgs {
    double t = 0.0;
    double dev = 0.0;  // xbar - x^i
    EquilibriumMode mode = EquilibriumMode::ClosedLoop;
};

const std::vector<std::string>& query_names();

/// Analytic quantity by name: p, systemic-prob, systemic-limit, ld-rate, eta,
/// eta-bar, mu, gain, A, A-bar, value. Throws UnknownQuery.
double query(std::string_view name, const ModelParams& params, const QueryArgs& args);

/// Formats with 12 significant digits.
std::string format_query_result(double value);

std::string_view library_version();

}  // namespace sysrisk
