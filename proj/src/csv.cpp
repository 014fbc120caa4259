#include "ldmd/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ldmd::csv {

std::string number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int Table::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

namespace {
std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}
}  // namespace

Table read(std::istream& in) {
    Table t;
    std::string line;
    do {
        if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
        if (!line.empty() && line.back() == '\r') line.pop_back();
    } while (!line.empty() && line[0] == '#');
    t.header = split(line);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != t.header.size())
            throw std::runtime_error("CSV line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                                     " cells, header has " + std::to_string(t.header.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) {
            char* end = nullptr;
            const double v = std::strtod(c.c_str(), &end);
            if (c.empty() || *end != '\0')
                throw std::runtime_error("CSV line " + std::to_string(lineno) + ": not a number '" + c + "'");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read(in);
}

void write_time_rows(std::ostream& out, const Matrix& data, const std::vector<double>& times,
                     const std::string& prefix) {
    if (static_cast<Eigen::Index>(times.size()) != data.cols())
        throw DimensionMismatch("one time per column required");
    out << 't';
    for (Eigen::Index i = 0; i < data.rows(); ++i) out << ',' << prefix << '_' << (i + 1);
    out << '\n';
    for (Eigen::Index k = 0; k < data.cols(); ++k) {
        out << number(times[static_cast<size_t>(k)]);
        for (Eigen::Index i = 0; i < data.rows(); ++i) out << ',' << number(data(i, k));
        out << '\n';
    }
}

}  // namespace ldmd::csv
