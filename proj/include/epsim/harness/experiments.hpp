#pragma once

#include <optional>
#include <string>
#include <vector>

#include "epsim/harness/config.hpp"

namespace epsim::harness {

/// Built-in experiments in catalog order.
const std::vector<ExperimentConfig>& builtin_experiments();

std::optional<ExperimentConfig> find_builtin(const std::string& name);

std::vector<std::string> builtin_names();

/// One line per experiment with its parameter summary.
std::string catalog();

}  // namespace epsim::harness
