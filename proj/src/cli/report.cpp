#include "augdem/cli/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "augdem/core/errors.hpp"
#include "augdem/data/csv.hpp"

namespace augdem::cli {
namespace {

namespace fs = std::filesystem;

std::string find_config_hash(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::string line;
    // Provenance lives in the first handful of lines ('#' comments in CSV,
    // a "config_hash" field in JSON).
    for (int i = 0; i < 40 && std::getline(in, line); ++i) {
        const auto pos = line.find("config_hash");
        if (pos == std::string::npos) continue;
        std::string value;
        bool in_token = false;
        for (std::size_t c = pos + std::string("config_hash").size(); c < line.size(); ++c) {
            const char ch = line[c];
            if (std::isxdigit(static_cast<unsigned char>(ch))) {
                value.push_back(ch);
                in_token = true;
            } else if (in_token) {
                break;
            }
        }
        if (value.size() == 16) return value;
    }
    return "";
}

}  // namespace

void write_table(const std::string& path, const Provenance& provenance,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path);
    for (const auto& [key, value] : provenance) out << "# " << key << "=" << value << "\n";
    data::write_csv_row(out, header);
    for (const auto& row : rows) data::write_csv_row(out, row);
}

void write_text_file(const std::string& path, const std::string& content) {
    fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path);
    out << content;
}

void verify_bundle(const std::string& dir) {
    std::string expected;
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        const std::string hash = find_config_hash(file);
        if (hash.empty()) continue;
        if (expected.empty()) expected = hash;
        else if (hash != expected)
            throw ConfigError("output bundle is inconsistent: " + file.string() +
                              " carries config_hash " + hash + ", expected " + expected);
    }
}

std::string format_double(double value, int decimals) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
    return buffer;
}

void write_line_chart_svg(const std::string& path, const std::string& title,
                          const std::vector<ChartSeries>& series) {
    constexpr int kWidth = 640, kHeight = 420, kMargin = 56;
    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
    bool first = true;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (first) {
                x_lo = x_hi = x;
                y_lo = y_hi = y;
                first = false;
            }
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    }
    if (x_hi == x_lo) x_hi = x_lo + 1.0;
    if (y_hi == y_lo) y_hi = y_lo + 1.0;
    const auto sx = [&](double x) {
        return kMargin + (x - x_lo) / (x_hi - x_lo) * (kWidth - 2 * kMargin);
    };
    const auto sy = [&](double y) {
        return kHeight - kMargin - (y - y_lo) / (y_hi - y_lo) * (kHeight - 2 * kMargin);
    };

    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << title << "</text>\n";
    svg << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
        << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
        << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double fx = x_lo + (x_hi - x_lo) * tick / 4.0;
        const double fy = y_lo + (y_hi - y_lo) * tick / 4.0;
        svg << "<text x=\"" << format_double(sx(fx), 1) << "\" y=\"" << kHeight - kMargin + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(fx, 2)
            << "</text>\n";
        svg << "<text x=\"" << kMargin - 8 << "\" y=\"" << format_double(sy(fy) + 4, 1)
            << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(fy, 2) << "</text>\n";
    }
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kColors[s % 5];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : series[s].points)
            svg << format_double(sx(x), 2) << "," << format_double(sy(y), 2) << " ";
        svg << "\"/>\n";
        svg << "<text x=\"" << kWidth - kMargin + 4 << "\" y=\"" << kMargin + 16 * s
            << "\" font-size=\"11\" fill=\"" << color << "\" text-anchor=\"end\">"
            << series[s].name << "</text>\n";
    }
    svg << "</svg>\n";
    write_text_file(path, svg.str());
}

WinRateTable read_winrates_table(const std::string& path) {
    const data::CsvTable table = data::read_csv_file(path);
    WinRateTable out;
    const int id_col = table.require_column("proposal_id");
    const int wins_col = table.require_column("wins");
    const int appearances_col = table.require_column("appearances");
    for (const auto& row : table.rows) {
        WinRateEntry entry;
        entry.wins = std::stoull(row[wins_col]);
        entry.appearances = std::stoull(row[appearances_col]);
        if (entry.appearances > 0)
            entry.win_rate =
                static_cast<double>(entry.wins) / static_cast<double>(entry.appearances);
        out.entries[std::stoll(row[id_col])] = entry;
    }
    return out;
}

}  // namespace augdem::cli
