#include "sbpp/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <random>
#include <set>
#include <sstream>

namespace sbpp::geo {

namespace {

double parse_double(std::string_view s, const std::string& where) {
    std::string tmp(s);
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(tmp, &used);
    } catch (const std::exception&) {
        throw ParseError(where + ": not a number: '" + tmp + "'");
    }
    if (used != tmp.size()) throw ParseError(where + ": trailing characters in '" + tmp + "'");
    return v;
}

std::string drop_id(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "d%06zu", i);
    return buf;
}

}  // namespace

BoundingBox parse_bbox(std::string_view text) {
    std::vector<double> v;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        auto part = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        v.push_back(parse_double(part, "bbox"));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (v.size() != 4) throw ParseError("bbox: expected lat_min,lon_min,lat_max,lon_max");
    BoundingBox box{v[0], v[1], v[2], v[3]};
    if (box.lat_min >= box.lat_max || box.lon_min >= box.lon_max) {
        throw ParseError("bbox: empty box");
    }
    check_coordinates(box.lat_min, box.lon_min);
    check_coordinates(box.lat_max, box.lon_max);
    return box;
}

std::vector<Drop> parse_corpus(std::string_view text) {
    std::vector<Drop> drops;
    std::set<std::string> ids;
    std::istringstream is{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::string where = "corpus line " + std::to_string(line_no);
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
            throw ParseError(where + ": expected id<TAB>lat<TAB>lon");
        }
        Drop d;
        d.id = line.substr(0, t1);
        if (d.id.empty()) throw ParseError(where + ": empty id");
        d.lat = parse_double(std::string_view(line).substr(t1 + 1, t2 - t1 - 1), where);
        d.lon = parse_double(std::string_view(line).substr(t2 + 1), where);
        try {
            check_coordinates(d.lat, d.lon);
        } catch (const GeoError& e) {
            throw ParseError(where + ": " + e.what());
        }
        if (!ids.insert(d.id).second) throw ParseError(where + ": duplicate id '" + d.id + "'");
        drops.push_back(std::move(d));
    }
    return drops;
}

std::vector<Drop> load_corpus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open corpus file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_corpus(text);
}

std::string format_corpus(const std::vector<Drop>& drops) {
    std::ostringstream os;
    os.precision(9);
    os << std::fixed << "# id\tlat\tlon\n";
    for (const auto& d : drops) os << d.id << '\t' << d.lat << '\t' << d.lon << '\n';
    return os.str();
}

void write_corpus(const std::string& path, const std::vector<Drop>& drops) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write corpus file: " + path);
    out << format_corpus(drops);
}

std::vector<Drop> generate_uniform(std::size_t n, const BoundingBox& box, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> lat(box.lat_min, box.lat_max);
    std::uniform_real_distribution<double> lon(box.lon_min, box.lon_max);
    std::vector<Drop> drops;
    drops.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double la = lat(rng);
        double lo = lon(rng);
        drops.push_back({drop_id(i), la, lo});
    }
    return drops;
}

std::vector<Drop> generate_clustered(std::size_t n, const BoundingBox& box, std::uint64_t seed,
                                     std::size_t clusters) {
    if (clusters == 0) clusters = 1;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> lat(box.lat_min, box.lat_max);
    std::uniform_real_distribution<double> lon(box.lon_min, box.lon_max);
    std::vector<std::pair<double, double>> centers;
    for (std::size_t c = 0; c < clusters; ++c) {
        double la = lat(rng);
        double lo = lon(rng);
        centers.emplace_back(la, lo);
    }
    std::normal_distribution<double> dlat(0, (box.lat_max - box.lat_min) * 0.01);
    std::normal_distribution<double> dlon(0, (box.lon_max - box.lon_min) * 0.01);
    std::uniform_int_distribution<std::size_t> pick(0, clusters - 1);
    std::vector<Drop> drops;
    drops.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto [cla, clo] = centers[pick(rng)];
        double la = std::clamp(cla + dlat(rng), box.lat_min, box.lat_max);
        double lo = std::clamp(clo + dlon(rng), box.lon_min, box.lon_max);
        drops.push_back({drop_id(i), la, lo});
    }
    return drops;
}

}  // namespace sbpp::geo
