#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "napde/errors.hpp"

namespace napde {

/// Shortest round-trip decimal representation; deterministic across runs.
inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Header + rows, comma separated, LF line endings.
inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    for (std::size_t j = 0; j < header.size(); ++j)
        out << (j ? "," : "") << header[j];
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw Error("csv row width mismatch in '" + path + "'");
        for (std::size_t j = 0; j < row.size(); ++j)
            out << (j ? "," : "") << row[j];
        out << "\n";
    }
}

} // namespace napde
