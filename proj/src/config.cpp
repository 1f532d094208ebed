#include "sysrisk/config.hpp"

#include <array>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace sysrisk {

namespace {

constexpr std::array<const char*, 9> kParamNames = {
    "n_banks", "a", "q", "epsilon", "c", "sigma", "rho", "horizon", "default_level"};

}  // namespace

bool is_param_name(const std::string& key) {
    for (const char* name : kParamNames) {
        if (key == name) return true;
    }
    return false;
}

ParamOverrides load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::DomainError, "cannot open config file " + path.string(), "config");

    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::DomainError, "malformed config " + path.string() + ": " + e.what(),
                    "config");
    }
    if (!doc.is_object()) {
        throw Error(ErrorKind::DomainError, "config must be a JSON object", "config");
    }

    ParamOverrides out;
    for (const auto& [key, value] : doc.items()) {
        if (!is_param_name(key)) {
            throw Error(ErrorKind::DomainError, "unknown parameter '" + key + "'", key);
        }
        if (!value.is_number()) {
            throw Error(ErrorKind::DomainError, "parameter '" + key + "' must be numeric", key);
        }
        out[key] = value.get<double>();
    }
    return out;
}

ModelParams apply_overrides(ModelParams p, const ParamOverrides& overrides) {
    for (const auto& [key, value] : overrides) {
        if (key == "n_banks") {
            if (value != std::floor(value) || value < 1.0 || value > 1e9) {
                throw Error(ErrorKind::DomainError, "n_banks must be a positive integer", key);
            }
            p.n_banks = static_cast<int>(value);
        } else if (key == "a") {
            p.a = value;
        } else if (key == "q") {
            p.q = value;
        } else if (key == "epsilon") {
            p.epsilon = value;
        } else if (key == "c") {
            p.c = value;
        } else if (key == "sigma") {
            p.sigma = value;
        } else if (key == "rho") {
            p.rho = value;
        } else if (key == "horizon") {
            p.horizon = value;
        } else if (key == "default_level") {
            p.default_level = value;
        } else {
            throw Error(ErrorKind::DomainError, "unknown parameter '" + key + "'", key);
        }
    }
    return p;
}

}  // namespace sysrisk
