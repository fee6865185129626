#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "napde/problem.hpp"

namespace napde {

enum class Suite { Solve, Verify, Converge, Opcheck };

/// Declarative run description: sectioned key-value text, no code execution.
struct Config {
    Suite suite = Suite::Solve;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int levels = 4;

    std::string preset_name = "heat-dirichlet";
    double T = 1.0;
    int N = 100;
    std::string scheme = "implicit-euler";
    double tau = 1e-3;
    std::vector<double> snapshot_times;

    /// raw field-override expressions by coefficient name (S,H,P0,P1,W_R,f,x0)
    std::map<std::string, std::string> coefficient_overrides;
};

Config load_config(const std::string& path);
Config parse_config_text(const std::string& text);

/// Serialize back to the file format (parse-serialize round trip is identity
/// up to normalization).
std::string serialize_config(const Config& cfg);

/// Parse a coefficient expression ("const ...", "polyt ...", "polyz ...",
/// "pwt ...") into a rows x cols field.
MatrixField parse_field(const std::string& text, int rows, int cols);

/// Preset plus overrides, horizon applied.
ProblemSpec build_problem(const Config& cfg);

/// Initial datum for the v-variable; the x0 override (zeta polynomial) or the
/// default G * sin(pi zeta) profile.
std::function<Vector(double)> initial_datum(const Config& cfg, const ProblemSpec& spec);

} // namespace napde
