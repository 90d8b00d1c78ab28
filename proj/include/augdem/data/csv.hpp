#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace augdem::data {

// Minimal RFC-4180 style CSV with a required header row. Quoted fields may
// contain commas, quotes ("" escape) and newlines; unquoted fields are
// trimmed of surrounding whitespace. Lines starting with '#' before or after
// the header are provenance comments and are skipped.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    // 1-based physical line number of each row, for diagnostics.
    std::vector<std::size_t> row_lines;

    int column(const std::string& name) const;           // -1 when absent
    int require_column(const std::string& name) const;   // throws ParseError
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace augdem::data
