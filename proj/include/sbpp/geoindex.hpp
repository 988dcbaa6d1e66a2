#pragma once

// Encrypted geographic search over geohash cells: HMAC tokens per
// (precision, cell), a token -> drop-id index, and set-intersection matching.

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sbpp/bytes.hpp"

namespace sbpp::geo {

inline constexpr int kMinPrecision = 1;
inline constexpr int kMaxPrecision = 12;
inline constexpr int kMaxSearchPrecision = 9;
/// Mean Earth radius used by every distance computation in the project.
inline constexpr double kEarthRadiusM = 6371000.0;
/// Latitude band assumed when the caller has no query point (central Tokyo).
inline constexpr double kDefaultBandLatitude = 35.7;

class GeoError : public Error {
public:
    using Error::Error;
};

struct Drop {
    std::string id;
    double lat = 0;
    double lon = 0;
};

struct Box {
    double lat_min, lat_max, lon_min, lon_max;
    double lat_center() const { return (lat_min + lat_max) / 2; }
    double lon_center() const { return (lon_min + lon_max) / 2; }
    bool contains(double lat, double lon) const {
        return lat >= lat_min && lat <= lat_max && lon >= lon_min && lon <= lon_max;
    }
};

void check_coordinates(double lat, double lon);

std::string geohash_encode(double lat, double lon, int precision);
Box geohash_decode(std::string_view geohash);

/// Adjacent cells in N, NE, E, SE, S, SW, W, NW order. Longitude wraps at
/// the antimeridian; rows beyond a pole are omitted.
std::vector<std::string> neighbors(std::string_view geohash);

/// Cell height and width in degrees at a precision.
double cell_height_deg(int precision);
double cell_width_deg(int precision);

/// Largest precision in [1, 9] whose cells are at least `radius_m` tall and
/// wide near `band_lat`, so the 3x3 neighborhood of the cell containing a
/// query point covers every point within `radius_m` of it.
int precision_for_radius(double radius_m, double band_lat = kDefaultBandLatitude);

/// Great-circle distance (haversine), meters.
double haversine_m(double lat1, double lon1, double lat2, double lon2);

struct SearchToken {
    Hash32 tag{};
    int precision = 0;

    bool operator==(const SearchToken&) const = default;
};

/// tag = HMAC-SHA256(key, "gridse:index:<p>:<geohash>")
SearchToken make_token(ByteView key, int precision, std::string_view geohash);

/// Center cell plus its neighbors at the precision chosen for `radius_m`.
std::vector<SearchToken> client_tokens(ByteView key, double lat, double lon, double radius_m);

/// Plaintext cells a non-encrypted client would send (center + neighbors).
std::vector<std::string> client_cells(double lat, double lon, double radius_m);

struct Hash32Hasher {
    std::size_t operator()(const Hash32& h) const noexcept;
};

/// Immutable token -> ids index. Build once, then share read-only.
class GeoIndex {
public:
    GeoIndex() = default;

    /// Registers every drop under its cell token at each precision.
    /// Throws GeoError on duplicate ids or bad coordinates.
    static GeoIndex build(const std::vector<Drop>& drops, ByteView key,
                          const std::vector<int>& precisions);

    /// Sorted, deduplicated union of ids registered under any of `tokens`.
    std::vector<std::string> match(const std::vector<SearchToken>& tokens) const;

    std::size_t token_count() const { return entries_.size(); }
    /// Total (token, id) registrations.
    std::size_t entry_count() const;
    const std::vector<int>& precisions() const { return precisions_; }

    /// Text form: header line, then `p<TAB>tag_hex<TAB>id` per registration.
    std::string serialize() const;
    static GeoIndex deserialize(std::string_view text);

private:
    std::vector<int> precisions_;
    std::unordered_map<Hash32, std::vector<std::string>, Hash32Hasher> entries_;
    std::unordered_map<Hash32, int, Hash32Hasher> token_precision_;
};

/// Plaintext geohash index used by the non-encrypted baseline.
class PlainIndex {
public:
    static PlainIndex build(const std::vector<Drop>& drops, const std::vector<int>& precisions);
    std::vector<std::string> match(const std::vector<std::string>& cells) const;

private:
    std::unordered_map<std::string, std::vector<std::string>> entries_;
};

}  // namespace sbpp::geo
