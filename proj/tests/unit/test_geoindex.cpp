#include <gtest/gtest.h>

#include <random>

#include "sbpp/corpus.hpp"
#include "sbpp/geoindex.hpp"
#include "vectors.hpp"

using namespace sbpp;
using namespace sbpp::geo;
using sbpp::testing::vec;

TEST(Geohash, FrozenEncodings) {
    EXPECT_EQ(geohash_encode(35.6812, 139.7671, 5), vec("geohash_35.6812_139.7671_5"));
    EXPECT_EQ(geohash_encode(35.6812, 139.7671, 9), vec("geohash_35.6812_139.7671_9"));
    EXPECT_EQ(geohash_encode(57.64911, 10.40744, 11), vec("geohash_57.64911_10.40744_11"));
    EXPECT_EQ(geohash_encode(-33.8688, 151.2093, 7), vec("geohash_-33.8688_151.2093_7"));
    EXPECT_EQ(geohash_encode(0.0, 0.0, 6), vec("geohash_0.0_0.0_6"));
}

TEST(Geohash, RejectsBadInput) {
    EXPECT_THROW(geohash_encode(0, 0, 0), GeoError);
    EXPECT_THROW(geohash_encode(0, 0, 13), GeoError);
    EXPECT_THROW(geohash_encode(91, 0, 5), GeoError);
    EXPECT_THROW(geohash_encode(0, 181, 5), GeoError);
    EXPECT_THROW(geohash_decode("xn7a"), GeoError);  // 'a' is not in the alphabet
}

TEST(Geohash, DecodedCellContainsPoint) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> lat(-89.9, 89.9), lon(-179.9, 179.9);
    for (int i = 0; i < 2000; ++i) {
        double a = lat(gen), b = lon(gen);
        int p = 1 + static_cast<int>(gen() % 12);
        auto box = geohash_decode(geohash_encode(a, b, p));
        EXPECT_TRUE(box.contains(a, b));
        EXPECT_NEAR(box.lat_max - box.lat_min, cell_height_deg(p), 1e-12);
        EXPECT_NEAR(box.lon_max - box.lon_min, cell_width_deg(p), 1e-12);
    }
}

TEST(Geohash, NeighborsOfKnownCell) {
    auto n = neighbors("xn76u");
    ASSERT_EQ(n.size(), 8u);
    auto center = geohash_decode("xn76u");
    double h = cell_height_deg(5), w = cell_width_deg(5);
    // N, NE, E, SE, S, SW, W, NW
    const int dy[] = {1, 1, 0, -1, -1, -1, 0, 1};
    const int dx[] = {0, 1, 1, 1, 0, -1, -1, -1};
    for (int i = 0; i < 8; ++i) {
        EXPECT_EQ(n[i], geohash_encode(center.lat_center() + dy[i] * h, center.lon_center() + dx[i] * w, 5));
    }
}

TEST(Geohash, NeighborsWrapAtAntimeridian) {
    auto cell = geohash_encode(10.0, 179.99, 4);
    auto n = neighbors(cell);
    ASSERT_EQ(n.size(), 8u);
    auto east = geohash_decode(n[2]);
    EXPECT_LT(east.lon_min, -170.0);
}

TEST(Geohash, NeighborsOmitRowsBeyondPole) {
    auto cell = geohash_encode(89.99, 20.0, 3);
    EXPECT_EQ(neighbors(cell).size(), 5u);
    cell = geohash_encode(-89.99, 20.0, 3);
    EXPECT_EQ(neighbors(cell).size(), 5u);
}

TEST(Precision, CoveringRule) {
    EXPECT_EQ(precision_for_radius(1000), 5);
    // 10 m: precision-9 cells are ~4.8 m tall, too small to cover, so 8.
    EXPECT_EQ(precision_for_radius(10), 8);
    EXPECT_EQ(precision_for_radius(1), 9);
    EXPECT_EQ(precision_for_radius(300), 6);
    EXPECT_EQ(precision_for_radius(5'000'000), 1);
    EXPECT_THROW(precision_for_radius(0), GeoError);
    EXPECT_THROW(precision_for_radius(-5), GeoError);
}

TEST(Precision, MonotoneInRadius) {
    int prev = kMaxSearchPrecision;
    for (double r = 0.5; r < 3e6; r *= 1.3) {
        int p = precision_for_radius(r);
        EXPECT_LE(p, prev);
        prev = p;
    }
}

TEST(Haversine, KnownDistances) {
    EXPECT_DOUBLE_EQ(haversine_m(35, 139, 35, 139), 0.0);
    // One degree of latitude on a 6371 km sphere.
    EXPECT_NEAR(haversine_m(0, 0, 1, 0), 111'194.93, 0.01);
    // Tokyo Station to Shinjuku Station, ~6.1 km.
    EXPECT_NEAR(haversine_m(35.6812, 139.7671, 35.6896, 139.7006), 6070, 60);
}

TEST(Token, FrozenVector) {
    Hash32 key{};
    auto t = make_token(key, 5, "xn76u");
    EXPECT_EQ(to_hex(t.tag), vec("token_zero_5_xn76u"));
    EXPECT_EQ(t.precision, 5);
}

TEST(Token, DeterministicAndKeyDependent) {
    Hash32 k1{}, k2{};
    k2[0] = 1;
    EXPECT_EQ(make_token(k1, 5, "xn76u"), make_token(k1, 5, "xn76u"));
    EXPECT_NE(make_token(k1, 5, "xn76u").tag, make_token(k2, 5, "xn76u").tag);
    EXPECT_NE(make_token(k1, 5, "xn76u").tag, make_token(k1, 6, "xn76u").tag);
}

TEST(Token, ClientTokensAtChosenPrecision) {
    Hash32 key{};
    auto tokens = client_tokens(key, 35.6812, 139.7671, 1000);
    ASSERT_EQ(tokens.size(), 9u);
    for (const auto& t : tokens) EXPECT_EQ(t.precision, 5);
    auto cells = client_cells(35.6812, 139.7671, 1000);
    ASSERT_EQ(cells.size(), 9u);
    EXPECT_EQ(cells[0], "xn76u");
    EXPECT_EQ(tokens[0], make_token(key, 5, "xn76u"));
}

TEST(Index, SingleDrop) {
    Hash32 key{};
    auto idx = GeoIndex::build({{"only", 35.6812, 139.7671}}, key, {5});
    EXPECT_EQ(idx.token_count(), 1u);
    EXPECT_EQ(idx.match({make_token(key, 5, "xn76u")}), std::vector<std::string>{"only"});
    EXPECT_TRUE(idx.match({make_token(key, 5, "xn76v")}).empty());
}

TEST(Index, EntryCountAndDuplicates) {
    Hash32 key{};
    auto drops = generate_uniform(1000, kTokyoBox, 3);
    auto idx = GeoIndex::build(drops, key, {4, 5, 6});
    EXPECT_EQ(idx.entry_count(), 3000u);
    drops.push_back(drops.front());
    EXPECT_THROW(GeoIndex::build(drops, key, {5}), GeoError);
}

TEST(Index, MatchIsSortedUnique) {
    Hash32 key{};
    auto drops = generate_uniform(500, kTokyoBox, 4);
    auto idx = GeoIndex::build(drops, key, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    auto tokens = client_tokens(key, 35.7, 139.75, 2000);
    tokens.insert(tokens.end(), tokens.begin(), tokens.end());
    auto ids = idx.match(tokens);
    EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
    EXPECT_EQ(std::adjacent_find(ids.begin(), ids.end()), ids.end());
}

TEST(Index, SerializeRoundTrip) {
    Hash32 key{};
    key[3] = 7;
    auto drops = generate_uniform(200, kTokyoBox, 8);
    auto idx = GeoIndex::build(drops, key, {5, 6});
    auto again = GeoIndex::deserialize(idx.serialize());
    EXPECT_EQ(again.entry_count(), idx.entry_count());
    EXPECT_EQ(again.serialize(), idx.serialize());
    auto tokens = client_tokens(key, 35.7, 139.75, 1000);
    EXPECT_EQ(again.match(tokens), idx.match(tokens));
    EXPECT_THROW(GeoIndex::deserialize("not an index\n"), ParseError);
}

TEST(Index, PlainMatchesEncrypted) {
    Hash32 key{};
    auto drops = generate_uniform(500, kTokyoBox, 9);
    std::vector<int> ps = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    auto enc = GeoIndex::build(drops, key, ps);
    auto plain = PlainIndex::build(drops, ps);
    for (double r : {100.0, 500.0, 1000.0, 3000.0}) {
        EXPECT_EQ(plain.match(client_cells(35.7, 139.75, r)), enc.match(client_tokens(key, 35.7, 139.75, r)));
    }
}

// Every in-radius drop lies in the 3x3 neighborhood at the chosen precision.
TEST(IndexProperty, CoveringRecallIsOne) {
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> lat(-60, 60), lon(-179.5, 179.5), unit(0, 1);
    std::size_t in_radius = 0;
    for (int i = 0; i < 10'000; ++i) {
        double qa = lat(gen), qb = lon(gen);
        double r = std::exp(std::log(5.0) + unit(gen) * (std::log(5000.0) - std::log(5.0)));
        // Drop within ~1.2 r of the query.
        double ang = unit(gen) * 2 * 3.141592653589793, dist = unit(gen) * 1.2 * r;
        double da = dist * std::cos(ang) / 111'194.93;
        double db = dist * std::sin(ang) / (111'194.93 * std::cos(qa * 3.141592653589793 / 180));
        double pa = qa + da, pb = qb + db;
        if (haversine_m(qa, qb, pa, pb) > r) continue;
        ++in_radius;
        int p = precision_for_radius(r, qa);
        auto cells = client_cells(qa, qb, r);
        auto want = geohash_encode(pa, pb, p);
        ASSERT_NE(std::find(cells.begin(), cells.end(), want), cells.end())
            << "query " << qa << "," << qb << " r=" << r << " drop " << pa << "," << pb;
    }
    EXPECT_GT(in_radius, 5000u);
}

TEST(Corpus, ParseAndFormat) {
    auto drops = parse_corpus("# header\n\na\t35.1\t139.2\nb\t-10\t20.5\n");
    ASSERT_EQ(drops.size(), 2u);
    EXPECT_EQ(drops[1].id, "b");
    EXPECT_DOUBLE_EQ(drops[1].lon, 20.5);
    EXPECT_EQ(parse_corpus(format_corpus(drops)).size(), 2u);
}

TEST(Corpus, ErrorsNameTheLine) {
    try {
        parse_corpus("a\t1\t2\nb\tx\t2\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    EXPECT_THROW(parse_corpus("a\t1\t2\na\t3\t4\n"), ParseError);
    EXPECT_THROW(parse_corpus("a\t95\t2\n"), ParseError);
}

TEST(Corpus, GeneratorsAreSeededAndInsideBox) {
    auto a = generate_uniform(1000, kTokyoBox, 42);
    auto b = generate_uniform(1000, kTokyoBox, 42);
    ASSERT_EQ(a.size(), 1000u);
    EXPECT_EQ(format_corpus(a), format_corpus(b));
    for (const auto& d : a) {
        EXPECT_GE(d.lat, kTokyoBox.lat_min);
        EXPECT_LE(d.lat, kTokyoBox.lat_max);
        EXPECT_GE(d.lon, kTokyoBox.lon_min);
        EXPECT_LE(d.lon, kTokyoBox.lon_max);
    }
    auto c = generate_clustered(1000, kTokyoBox, 42);
    EXPECT_EQ(c.size(), 1000u);
    EXPECT_THROW(parse_bbox("1,2,3"), ParseError);
    auto box = parse_bbox("35.6,139.6,35.8,139.9");
    EXPECT_DOUBLE_EQ(box.lon_max, 139.9);
}
