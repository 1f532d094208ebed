#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "sysrisk/model.hpp"

namespace sysrisk {

/// Parameter name -> value. Keys are the ModelParams field names.
using ParamOverrides = std::map<std::string, double>;

/// Reads a flat JSON object such as {"n_banks": 10, "a": 1.0, ...}.
/// Unknown keys and non-numeric values are rejected with DomainError.
ParamOverrides load_config(const std::filesystem::path& path);

/// Applies overrides on top of `base`; n_banks must be a positive integer value.
ModelParams apply_overrides(ModelParams base, const ParamOverrides& overrides);

bool is_param_name(const std::string& key);

}  // namespace sysrisk
