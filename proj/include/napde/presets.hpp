#pragma once

#include <string>
#include <vector>

#include "napde/problem.hpp"

namespace napde {

/// Named coefficient catalogues: heat-{dirichlet,neumann,robin,periodic} and
/// damped-wave-{dirichlet,free,periodic}.
ProblemSpec preset(const std::string& name);

std::vector<std::string> preset_names();

} // namespace napde
