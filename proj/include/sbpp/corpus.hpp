#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sbpp/geoindex.hpp"

namespace sbpp::geo {

/// Latitude/longitude rectangle used by the synthetic generators.
struct BoundingBox {
    double lat_min = 35.6;
    double lon_min = 139.6;
    double lat_max = 35.8;
    double lon_max = 139.9;
};

inline constexpr BoundingBox kTokyoBox{};

/// Parses `lat_min,lon_min,lat_max,lon_max`.
BoundingBox parse_bbox(std::string_view text);

/// Parses `id<TAB>lat<TAB>lon` lines; blank lines and `#` comments are
/// skipped. Errors name the offending line.
std::vector<Drop> parse_corpus(std::string_view text);
std::vector<Drop> load_corpus(const std::string& path);

std::string format_corpus(const std::vector<Drop>& drops);
void write_corpus(const std::string& path, const std::vector<Drop>& drops);

std::vector<Drop> generate_uniform(std::size_t n, const BoundingBox& box, std::uint64_t seed);

/// Gaussian clusters (sigma ~ 1% of the box) around random centers,
/// clipped to the box.
std::vector<Drop> generate_clustered(std::size_t n, const BoundingBox& box, std::uint64_t seed,
                                     std::size_t clusters = 10);

}  // namespace sbpp::geo
