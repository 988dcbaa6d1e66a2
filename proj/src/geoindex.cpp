#include "sbpp/geoindex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

#include "sbpp/canon.hpp"

namespace sbpp::geo {

namespace {

constexpr std::string_view kBase32 = "0123456789bcdefghjkmnpqrstuvwxyz";

int base32_value(char c) {
    auto pos = kBase32.find(c);
    return pos == std::string_view::npos ? -1 : static_cast<int>(pos);
}

void check_precision(int precision) {
    if (precision < kMinPrecision || precision > kMaxPrecision) {
        throw GeoError("geohash precision out of range: " + std::to_string(precision));
    }
}

double to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

double wrap_lon(double lon) {
    while (lon >= 180.0) lon -= 360.0;
    while (lon < -180.0) lon += 360.0;
    return lon;
}

void sort_unique(std::vector<std::string>& ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

}  // namespace

void check_coordinates(double lat, double lon) {
    if (!(lat >= -90.0 && lat <= 90.0) || !(lon >= -180.0 && lon <= 180.0)) {
        throw GeoError("coordinates out of range");
    }
}

std::string geohash_encode(double lat, double lon, int precision) {
    check_precision(precision);
    check_coordinates(lat, lon);
    double lat_lo = -90, lat_hi = 90, lon_lo = -180, lon_hi = 180;
    std::string out;
    out.reserve(precision);
    bool even = true;  // even bits refine longitude
    int bit = 0, value = 0;
    while (static_cast<int>(out.size()) < precision) {
        if (even) {
            double mid = (lon_lo + lon_hi) / 2;
            if (lon >= mid) {
                value = (value << 1) | 1;
                lon_lo = mid;
            } else {
                value <<= 1;
                lon_hi = mid;
            }
        } else {
            double mid = (lat_lo + lat_hi) / 2;
            if (lat >= mid) {
                value = (value << 1) | 1;
                lat_lo = mid;
            } else {
                value <<= 1;
                lat_hi = mid;
            }
        }
        even = !even;
        if (++bit == 5) {
            out.push_back(kBase32[value]);
            bit = 0;
            value = 0;
        }
    }
    return out;
}

Box geohash_decode(std::string_view geohash) {
    check_precision(static_cast<int>(geohash.size()));
    Box box{-90, 90, -180, 180};
    bool even = true;
    for (char c : geohash) {
        int v = base32_value(c);
        if (v < 0) throw GeoError("invalid geohash character");
        for (int shift = 4; shift >= 0; --shift) {
            bool one = (v >> shift) & 1;
            if (even) {
                double mid = (box.lon_min + box.lon_max) / 2;
                (one ? box.lon_min : box.lon_max) = mid;
            } else {
                double mid = (box.lat_min + box.lat_max) / 2;
                (one ? box.lat_min : box.lat_max) = mid;
            }
            even = !even;
        }
    }
    return box;
}

double cell_height_deg(int precision) {
    check_precision(precision);
    int lat_bits = (5 * precision) / 2;
    return 180.0 / std::ldexp(1.0, lat_bits);
}

double cell_width_deg(int precision) {
    check_precision(precision);
    int lon_bits = (5 * precision + 1) / 2;
    return 360.0 / std::ldexp(1.0, lon_bits);
}

std::vector<std::string> neighbors(std::string_view geohash) {
    Box box = geohash_decode(geohash);
    int p = static_cast<int>(geohash.size());
    double h = box.lat_max - box.lat_min;
    double w = box.lon_max - box.lon_min;
    static constexpr int kOffsets[8][2] = {{1, 0},  {1, 1},   {0, 1},  {-1, 1},
                                           {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
    std::vector<std::string> out;
    out.reserve(8);
    for (const auto& off : kOffsets) {
        double lat = box.lat_center() + off[0] * h;
        if (lat > 90.0 || lat < -90.0) continue;
        double lon = wrap_lon(box.lon_center() + off[1] * w);
        std::string g = geohash_encode(lat, lon, p);
        if (g == geohash) continue;
        if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(std::move(g));
    }
    return out;
}

int precision_for_radius(double radius_m, double band_lat) {
    if (!(radius_m > 0)) throw GeoError("radius must be positive");
    for (int p = kMaxSearchPrecision; p >= kMinPrecision; --p) {
        double h = cell_height_deg(p);
        double w = cell_width_deg(p);
        // Worst case: query on the poleward edge of its cell, target a further
        // cell-height poleward, where meridians are closest together.
        double phi_max = std::min(90.0, std::fabs(band_lat) + 2 * h);
        double height_m = kEarthRadiusM * to_rad(h);
        double width_m =
            2 * kEarthRadiusM * std::asin(std::cos(to_rad(phi_max)) * std::sin(to_rad(w) / 2));
        if (std::min(height_m, width_m) >= radius_m) return p;
    }
    return kMinPrecision;
}

double haversine_m(double lat1, double lon1, double lat2, double lon2) {
    double dphi = to_rad(lat2 - lat1);
    double dlambda = to_rad(lon2 - lon1);
    double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
               std::cos(to_rad(lat1)) * std::cos(to_rad(lat2)) * std::sin(dlambda / 2) *
                   std::sin(dlambda / 2);
    return 2 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(a)));
}

SearchToken make_token(ByteView key, int precision, std::string_view geohash) {
    if (key.size() != kHashSize) throw GeoError("search key must be 32 bytes");
    std::string label = "gridse:index:" + std::to_string(precision) + ":";
    label.append(geohash);
    return {canon::hmac_sha256(key, as_bytes(label)), precision};
}

std::vector<std::string> client_cells(double lat, double lon, double radius_m) {
    check_coordinates(lat, lon);
    int p = precision_for_radius(radius_m, lat);
    std::string center = geohash_encode(lat, lon, p);
    std::vector<std::string> cells{center};
    for (auto& n : neighbors(center)) cells.push_back(std::move(n));
    return cells;
}

std::vector<SearchToken> client_tokens(ByteView key, double lat, double lon, double radius_m) {
    auto cells = client_cells(lat, lon, radius_m);
    std::vector<SearchToken> tokens;
    tokens.reserve(cells.size());
    for (const auto& g : cells) {
        tokens.push_back(make_token(key, static_cast<int>(g.size()), g));
    }
    return tokens;
}

std::size_t Hash32Hasher::operator()(const Hash32& h) const noexcept {
    std::size_t v;
    std::memcpy(&v, h.data(), sizeof v);
    return v;
}

GeoIndex GeoIndex::build(const std::vector<Drop>& drops, ByteView key,
                         const std::vector<int>& precisions) {
    GeoIndex index;
    index.precisions_ = precisions;
    std::set<std::string_view> seen;
    for (const auto& d : drops) {
        if (!seen.insert(d.id).second) throw GeoError("duplicate drop id: " + d.id);
        for (int p : precisions) {
            auto token = make_token(key, p, geohash_encode(d.lat, d.lon, p));
            index.entries_[token.tag].push_back(d.id);
            index.token_precision_[token.tag] = p;
        }
    }
    return index;
}

std::vector<std::string> GeoIndex::match(const std::vector<SearchToken>& tokens) const {
    std::vector<std::string> out;
    for (const auto& t : tokens) {
        auto it = entries_.find(t.tag);
        if (it != entries_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    }
    sort_unique(out);
    return out;
}

std::size_t GeoIndex::entry_count() const {
    std::size_t n = 0;
    for (const auto& [tag, ids] : entries_) n += ids.size();
    return n;
}

std::string GeoIndex::serialize() const {
    std::ostringstream os;
    os << "# sbpp-index v1 precisions=";
    for (std::size_t i = 0; i < precisions_.size(); ++i) {
        os << (i ? "," : "") << precisions_[i];
    }
    os << '\n';
    // Sorted output keeps the file deterministic.
    std::vector<std::pair<std::string, const std::vector<std::string>*>> rows;
    for (const auto& [tag, ids] : entries_) rows.emplace_back(to_hex(tag), &ids);
    std::sort(rows.begin(), rows.end());
    for (const auto& [hex, ids] : rows) {
        int p = token_precision_.at(hash32_from_hex(hex));
        for (const auto& id : *ids) os << p << '\t' << hex << '\t' << id << '\n';
    }
    return os.str();
}

GeoIndex GeoIndex::deserialize(std::string_view text) {
    GeoIndex index;
    std::istringstream is{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::set<int> precisions;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) {
            throw ParseError("index line " + std::to_string(line_no) + ": expected 3 fields");
        }
        try {
            int p = std::stoi(line.substr(0, t1));
            Hash32 tag = hash32_from_hex(line.substr(t1 + 1, t2 - t1 - 1));
            index.entries_[tag].push_back(line.substr(t2 + 1));
            index.token_precision_[tag] = p;
            precisions.insert(p);
        } catch (const std::exception& e) {
            throw ParseError("index line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    index.precisions_.assign(precisions.begin(), precisions.end());
    return index;
}

PlainIndex PlainIndex::build(const std::vector<Drop>& drops, const std::vector<int>& precisions) {
    PlainIndex index;
    for (const auto& d : drops) {
        for (int p : precisions) index.entries_[geohash_encode(d.lat, d.lon, p)].push_back(d.id);
    }
    return index;
}

std::vector<std::string> PlainIndex::match(const std::vector<std::string>& cells) const {
    std::vector<std::string> out;
    for (const auto& c : cells) {
        auto it = entries_.find(c);
        if (it != entries_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    }
    sort_unique(out);
    return out;
}

}  // namespace sbpp::geo
