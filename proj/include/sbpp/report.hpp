#pragma once
// Experiment output: an aligned text table for the terminal and a CSV file.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace sbpp {

struct ExperimentReport {
    std::string name;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_parameter(std::string key, std::string value);
    /// Throws Error when the row width differs from the column count.
    void add_row(std::vector<std::string> row);

    /// Name, parameters, then the table with columns padded to display width.
    std::string to_table() const;
    /// Header plus rows; fields quoted when they contain , " or newlines.
    std::string to_csv() const;
    /// Writes <dir>/<name>.csv, creating dir if needed. Returns the path.
    std::filesystem::path write_csv(const std::filesystem::path& dir) const;
};

std::string format_fixed(double v, int decimals = 3);

}  // namespace sbpp
