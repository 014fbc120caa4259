#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ldmd/core.hpp"

namespace ldmd::csv {

/// 17 significant digits; non-finite values print as nan/inf/-inf.
std::string number(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

/// Numeric CSV with one header line; leading '#' lines are skipped. Throws std::runtime_error on ragged or
/// non-numeric rows.
Table read(std::istream& in);
Table read_file(const std::string& path);

/// Header "t,<prefix>_1..<prefix>_N" then one row per column of `data`.
void write_time_rows(std::ostream& out, const Matrix& data, const std::vector<double>& times,
                     const std::string& prefix = "x");

}  // namespace ldmd::csv
