#pragma once

#include <string>
#include <vector>

#include "napde/config.hpp"

namespace napde::cli {

struct CheckLine {
    std::string name;
    double value = 0;
    double threshold = 0;
    bool pass = false;
};

struct RunResult {
    std::vector<CheckLine> checks;
    std::string summary;       ///< the text also written to <out>/summary.txt
    std::string first_failure; ///< empty when everything passed
    int exit_code = 0;         ///< 0 iff all checks pass

    bool ok() const { return exit_code == 0; }
};

/// Execute the suite selected by the config; writes trajectory/report CSVs and
/// a summary into cfg.out_dir.
RunResult run(const Config& cfg);

} // namespace napde::cli
