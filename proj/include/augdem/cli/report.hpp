#pragma once

#include <map>
#include <string>
#include <vector>

#include "augdem/core/types.hpp"

namespace augdem::cli {

// Key/value provenance stamped into every output file of a run. All files in
// one bundle must carry the same config_hash.
using Provenance = std::vector<std::pair<std::string, std::string>>;

// CSV with '# key=value' header comments before the column header.
void write_table(const std::string& path, const Provenance& provenance,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);

void write_text_file(const std::string& path, const std::string& content);

// Scans the directory's output files and throws if any two disagree on
// config_hash.
void verify_bundle(const std::string& dir);

std::string format_double(double value, int decimals = 6);

// Minimal static line chart; one polyline per series.
struct ChartSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};
void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::vector<ChartSeries>& series);

// Reads a win-rate table written by the winrates command; rates are
// reconstructed exactly from the integer wins/appearances columns.
WinRateTable read_winrates_table(const std::string& path);

}  // namespace augdem::cli
