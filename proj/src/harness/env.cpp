#include <cmath>
#include <numbers>
#include <random>

#include "sbpp/corpus.hpp"
#include "sbpp/harness.hpp"

namespace sbpp::harness {

geo::Drop offset(std::string id, double lat, double lon, double meters_north, double meters_east) {
    constexpr double deg = 180.0 / std::numbers::pi;
    double dlat = meters_north / geo::kEarthRadiusM * deg;
    double dlon = meters_east / (geo::kEarthRadiusM * std::cos(lat / deg)) * deg;
    return {std::move(id), lat + dlat, lon + dlon};
}

AttackEnvironment make_attack_environment(std::uint64_t seed, std::size_t background) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> lat_d(35.66, 35.74), lon_d(139.68, 139.82);
    std::uniform_real_distribution<double> angle_d(0, 2 * std::numbers::pi), dist_d(6000, 8000);

    AttackEnvironment env;
    env.seed = seed;
    double home_lat = lat_d(gen), home_lon = lon_d(gen);
    env.home_primary = {"home-1", home_lat, home_lon};
    env.home_secondary = offset("home-2", home_lat, home_lon, 20, 15);
    double a = angle_d(gen), r = dist_d(gen);
    env.remote = offset("remote-1", home_lat, home_lon, r * std::cos(a), r * std::sin(a));

    Hash32 key{};
    for (std::size_t i = 0; i < key.size(); i += 8) {
        auto v = gen();
        for (std::size_t j = 0; j < 8; ++j) key[i + j] = static_cast<std::uint8_t>(v >> (8 * j));
    }
    env.search_key = key;

    env.drops = {env.home_primary, env.home_secondary, env.remote};
    // Background kept clear of both search areas so result sets depend only on the seed's layout.
    for (auto& d : geo::generate_uniform(background * 2, geo::kTokyoBox, seed ^ 0x5bd1e995ULL)) {
        if (env.drops.size() == background + 3) break;
        if (geo::haversine_m(d.lat, d.lon, home_lat, home_lon) < 1000) continue;
        if (geo::haversine_m(d.lat, d.lon, env.remote.lat, env.remote.lon) < 1000) continue;
        env.drops.push_back(std::move(d));
    }
    return env;
}

variants::VariantConfig AttackEnvironment::variant_config(variants::TokenContent token) const {
    variants::VariantConfig c;
    c.drops = drops;
    c.search_key = search_key;
    c.seed = seed;
    c.unlock_radius_m = unlock_radius_m;
    c.v8_token = token;
    return c;
}

}  // namespace sbpp::harness
