#pragma once
// Loader for the frozen vectors produced by tests/oracles/gen_vectors.py.

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sbpp::testing {

inline std::string data_path(const std::string& name) { return std::string(SBPP_TEST_DATA_DIR) + "/" + name; }

/// Tab-separated rows of a vector file, comment lines skipped.
inline std::vector<std::vector<std::string>> read_rows(const std::string& name) {
    std::ifstream in(data_path(name));
    if (!in) throw std::runtime_error("missing vector file " + name);
    std::vector<std::vector<std::string>> rows;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, '\t');) cols.push_back(c);
        rows.push_back(cols);
    }
    return rows;
}

inline const std::map<std::string, std::string>& primitives() {
    static const auto table = [] {
        std::map<std::string, std::string> m;
        for (const auto& r : read_rows("primitive_vectors.txt")) m[r.at(0)] = r.at(1);
        return m;
    }();
    return table;
}

inline const std::string& vec(const std::string& name) { return primitives().at(name); }

}  // namespace sbpp::testing
