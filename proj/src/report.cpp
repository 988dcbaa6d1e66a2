#include "sbpp/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sbpp/bytes.hpp"

namespace sbpp {

namespace {

// Code points, so ✓ and × count as one column.
std::size_t display_width(const std::string& s) {
    std::size_t n = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void ExperimentReport::add_parameter(std::string key, std::string value) {
    parameters.emplace_back(std::move(key), std::move(value));
}

void ExperimentReport::add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw Error("report row width does not match columns");
    rows.push_back(std::move(row));
}

std::string ExperimentReport::to_table() const {
    std::vector<std::size_t> width(columns.size());
    for (std::size_t i = 0; i < columns.size(); ++i) width[i] = display_width(columns[i]);
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], display_width(r[i]));
    }
    auto line = [&](const std::vector<std::string>& cells) {
        std::string out;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += "  ";
            out += cells[i];
            if (i + 1 < cells.size()) out.append(width[i] - display_width(cells[i]), ' ');
        }
        return out + "\n";
    };

    std::ostringstream os;
    os << "== " << name << " ==\n";
    for (const auto& [k, v] : parameters) os << "  " << k << " = " << v << "\n";
    os << line(columns);
    std::size_t total = 0;
    for (auto w : width) total += w;
    os << std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') << "\n";
    for (const auto& r : rows) os << line(r);
    return os.str();
}

std::string ExperimentReport::to_csv() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << csv_field(cells[i]);
        }
        os << '\n';
    };
    line(columns);
    for (const auto& r : rows) line(r);
    return os.str();
}

std::filesystem::path ExperimentReport::write_csv(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    auto path = dir / (name + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << to_csv();
    return path;
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace sbpp
