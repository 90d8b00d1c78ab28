#include "augdem/data/csv.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "augdem/core/errors.hpp"

namespace augdem::data {
namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0, end = s.size();
    while (begin < end && (s[begin] == ' ' || s[begin] == '\t' || s[begin] == '\r')) ++begin;
    while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r')) --end;
    return s.substr(begin, end - begin);
}

}  // namespace

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

int CsvTable::require_column(const std::string& name) const {
    const int idx = column(name);
    if (idx < 0) throw ParseError("missing required column '" + name + "'");
    return idx;
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool row_started = false;
    bool field_quoted = false;
    std::size_t line = 1;
    std::size_t row_start_line = 1;

    auto end_field = [&] {
        fields.push_back(field_quoted ? field : trim(field));
        field.clear();
        field_quoted = false;
    };
    auto end_row = [&] {
        end_field();
        // Skip blank lines and comment lines.
        const bool comment = !fields.empty() && !fields[0].empty() && fields[0][0] == '#';
        const bool blank = fields.size() == 1 && fields[0].empty();
        if (!comment && !blank) {
            if (table.header.empty()) {
                table.header = fields;
            } else {
                if (fields.size() != table.header.size())
                    throw ParseError("expected " + std::to_string(table.header.size()) +
                                         " fields, found " + std::to_string(fields.size()),
                                     row_start_line);
                table.rows.push_back(fields);
                table.row_lines.push_back(row_start_line);
            }
        }
        fields.clear();
        row_started = false;
    };

    char c;
    while (in.get(c)) {
        if (!row_started) {
            row_started = true;
            row_start_line = line;
        }
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
        } else if (c == '"' && trim(field).empty()) {
            in_quotes = true;
            field_quoted = true;
            field.clear();
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            ++line;
            end_row();
        } else {
            field.push_back(c);
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted field", row_start_line);
    if (row_started) end_row();
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    return read_csv(in);
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos && field == trim(field)) return field;
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << csv_escape(fields[i]);
    }
    out.put('\n');
}

}  // namespace augdem::data
