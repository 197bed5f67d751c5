#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "harness.hpp"

namespace paraxfem {

/// Numbers are serialized with 17 significant digits so that doubles
/// round-trip losslessly through the CSV baselines.
inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline void write_csv(const CsvTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    for (std::size_t i = 0; i < table.header.size(); ++i)
        out << (i ? "," : "") << table.header[i];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (first) {
            table.header = cells;
            first = false;
        } else {
            table.rows.push_back(cells);
        }
    }
    return table;
}

/// converge: h,k,error,rate (rate empty on the first level or failures).
inline CsvTable to_csv(const ConvergenceReport& report) {
    CsvTable t;
    t.header = {"h", "k", "error", "rate"};
    for (const auto& lvl : report.levels) {
        std::vector<std::string> row{csv_number(lvl.h), csv_number(lvl.k),
                                     lvl.failed ? "" : csv_number(lvl.error),
                                     lvl.rate ? csv_number(*lvl.rate) : ""};
        t.rows.push_back(std::move(row));
    }
    return t;
}

/// wedge: r_m,depth_m,TL_dB,model,flag.
inline CsvTable to_csv(const TransmissionLossSeries& series) {
    CsvTable t;
    t.header = {"r_m", "depth_m", "TL_dB", "model", "flag"};
    const std::string flag = series.flagged_unstable ? "unstable" : "ok";
    for (std::size_t i = 0; i < series.range_m.size(); ++i)
        t.rows.push_back({csv_number(series.range_m[i]), csv_number(series.depth_m),
                          csv_number(series.tl_db[i]), series.model, flag});
    return t;
}

/// growth: t,l2_norm,profile.
inline CsvTable to_csv(const GrowthReport& report) {
    CsvTable t;
    t.header = {"t", "l2_norm", "profile"};
    for (std::size_t i = 0; i < report.times.size(); ++i)
        t.rows.push_back({csv_number(report.times[i]), csv_number(report.l2_norms[i]),
                          std::string(1, report.profile_id)});
    return t;
}

/// solve: t,l2_norm,model.
inline CsvTable monitors_csv(const std::vector<double>& times, const std::vector<double>& norms,
                             const std::string& model) {
    CsvTable t;
    t.header = {"t", "l2_norm", "model"};
    for (std::size_t i = 0; i < times.size(); ++i)
        t.rows.push_back({csv_number(times[i]), csv_number(norms[i]), model});
    return t;
}

} // namespace paraxfem
