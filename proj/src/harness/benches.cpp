#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <random>

#include "sbpp/corpus.hpp"
#include "sbpp/harness.hpp"

namespace sbpp::harness {

namespace {

using Clock = std::chrono::steady_clock;

double micros(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::micro>(b - a).count();
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

// Keeps results observable so the optimizer cannot drop the measured work.
volatile std::size_t g_sink = 0;

}  // namespace

// ---- Merkle scaling ------------------------------------------------------------

std::vector<MerkleBenchRow> run_merkle_bench(const std::vector<std::size_t>& sizes, std::uint64_t seed) {
    std::vector<MerkleBenchRow> rows;
    std::mt19937_64 gen(seed);
    for (std::size_t n : sizes) {
        std::vector<std::string> ids(n);
        for (std::size_t i = 0; i < n; ++i) {
            char buf[24];
            std::snprintf(buf, sizeof buf, "d%07zu", i);
            ids[i] = buf;
        }

        MerkleBenchRow row;
        row.n = n;
        auto t0 = Clock::now();
        auto tree = merkle::MerkleTree::build(ids);
        row.build_ms = micros(t0, Clock::now()) / 1000.0;

        constexpr std::size_t kSamples = 200;
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<std::string> sample(kSamples);
        for (auto& s : sample) s = ids[pick(gen)];

        std::vector<merkle::MerklePath> paths;
        paths.reserve(kSamples);
        t0 = Clock::now();
        for (const auto& s : sample) paths.push_back(tree.prove(s));
        row.prove_us = micros(t0, Clock::now()) / kSamples;

        std::size_t ok = 0;
        t0 = Clock::now();
        for (std::size_t i = 0; i < kSamples; ++i) ok += merkle::verify_membership(tree.root(), sample[i], paths[i]);
        row.verify_us = micros(t0, Clock::now()) / kSamples;
        if (ok != kSamples) throw Error("merkle bench: honest path failed to verify");

        for (const auto& p : paths) row.steps = std::max(row.steps, p.size());

        session::SessionRecord rec;
        rec.id = std::string(2 * session::kSessionIdBytes, '0');
        rec.expires_at = kBaseTime + session::kDefaultTtlSeconds;
        rec.mode = session::Mode::FullCompact;
        rec.root = tree.root();
        row.compact_state_bytes = session::verifier_state(rec).size();
        rec.mode = session::Mode::CoreStateful;
        rec.root.reset();
        rec.result_set = ids;
        row.stateful_state_bytes = session::verifier_state(rec).size();
        rows.push_back(row);
    }
    return rows;
}

ExperimentReport merkle_bench_report(const std::vector<MerkleBenchRow>& rows) {
    ExperimentReport rep;
    rep.name = "merkle_bench";
    rep.columns = {"n", "build_ms", "prove_us", "verify_us", "steps", "compact_state_B", "stateful_state_B"};
    for (const auto& r : rows) {
        rep.add_row({std::to_string(r.n), format_fixed(r.build_ms, 2), format_fixed(r.prove_us, 2),
                     format_fixed(r.verify_us, 2), std::to_string(r.steps),
                     std::to_string(r.compact_state_bytes), std::to_string(r.stateful_state_bytes)});
    }
    return rep;
}

// ---- protocol-path latency -------------------------------------------------------

LatencyStats summarize(std::string path, std::vector<double> s) {
    LatencyStats st;
    st.path = std::move(path);
    if (s.empty()) return st;
    std::sort(s.begin(), s.end());
    auto at = [&](double q) {
        auto idx = static_cast<std::size_t>(q * static_cast<double>(s.size() - 1) + 0.5);
        return s[std::min(idx, s.size() - 1)];
    };
    st.median_us = median_of(s);
    st.mean_us = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    st.p95_us = at(0.95);
    st.p99_us = at(0.99);
    return st;
}

const LatencyStats& LatencyBench::path(std::string_view name) const {
    for (const auto& p : paths) {
        if (p.path == name) return p;
    }
    throw Error("no latency path named " + std::string(name));
}

LatencyBench run_latency_bench(std::uint64_t seed, std::size_t n, std::size_t iterations,
                               std::size_t warmup) {
    constexpr double kRadius = 1000.0;
    auto drops = geo::generate_uniform(n, geo::kTokyoBox, seed);
    Hash32 key = canon::sha256(canon::Message{"latency-bench-key"}.add(std::to_string(seed)).encode());
    std::vector<int> precisions = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    auto index = geo::GeoIndex::build(drops, key, precisions);
    auto plain = geo::PlainIndex::build(drops, precisions);
    session::SessionStore store(std::make_shared<SeededRandom>(seed, "latency-bench"));

    std::mt19937_64 gen(seed + 7);
    std::uniform_real_distribution<double> lat_d(geo::kTokyoBox.lat_min, geo::kTokyoBox.lat_max);
    std::uniform_real_distribution<double> lon_d(geo::kTokyoBox.lon_min, geo::kTokyoBox.lon_max);

    std::vector<double> plain_us, gridse_us, sbpp_us;
    std::vector<double> c_session, c_tokens, c_match, c_digest, c_validate;
    const Timestamp now = kBaseTime;

    for (std::size_t i = 0; i < warmup + iterations; ++i) {
        double lat = lat_d(gen), lon = lon_d(gen);
        bool keep = i >= warmup;
        // Rotate the order so no path always runs on a cold cache.
        for (std::size_t k = 0; k < 3; ++k) {
            switch ((i + k) % 3) {
                case 0: {
                    auto t0 = Clock::now();
                    auto ids = plain.match(geo::client_cells(lat, lon, kRadius));
                    auto t1 = Clock::now();
                    g_sink = g_sink + ids.size();
                    if (keep) plain_us.push_back(micros(t0, t1));
                    break;
                }
                case 1: {
                    auto t0 = Clock::now();
                    auto ids = index.match(geo::client_tokens(key, lat, lon, kRadius));
                    auto t1 = Clock::now();
                    g_sink = g_sink + ids.size();
                    if (keep) gridse_us.push_back(micros(t0, t1));
                    break;
                }
                case 2: {
                    auto t0 = Clock::now();
                    auto ticket = store.issue(now);
                    auto t1 = Clock::now();
                    auto tokens = geo::client_tokens(key, lat, lon, kRadius);
                    auto t2 = Clock::now();
                    auto ids = index.match(tokens);
                    auto t3 = Clock::now();
                    auto rec = store.validate(ticket.id, now);
                    auto t4 = Clock::now();
                    auto cd = canon::cd_core(ids.empty() ? "" : ids.front(), rec.pv, rec.epoch, rec.nonce);
                    auto t5 = Clock::now();
                    g_sink = g_sink + ids.size() + cd.bytes()[31];
                    if (keep) {
                        sbpp_us.push_back(micros(t0, t5));
                        c_session.push_back(micros(t0, t1));
                        c_tokens.push_back(micros(t1, t2));
                        c_match.push_back(micros(t2, t3));
                        c_validate.push_back(micros(t3, t4));
                        c_digest.push_back(micros(t4, t5));
                    }
                    break;
                }
            }
        }
        if (i % 256 == 255) store.purge_all();
    }

    LatencyBench b;
    b.drops = n;
    b.iterations = iterations;
    b.paths.push_back(summarize("plaintext", std::move(plain_us)));
    b.paths.push_back(summarize("gridse", std::move(gridse_us)));
    b.paths.push_back(summarize("sbpp", std::move(sbpp_us)));
    b.sbpp_components_us = {{"session", median_of(c_session)},
                            {"tokens", median_of(c_tokens)},
                            {"match", median_of(c_match)},
                            {"validate", median_of(c_validate)},
                            {"digest", median_of(c_digest)}};
    return b;
}

ExperimentReport latency_report(const LatencyBench& b) {
    ExperimentReport rep;
    rep.name = "latency_bench";
    rep.add_parameter("drops", std::to_string(b.drops));
    rep.add_parameter("iterations", std::to_string(b.iterations));
    rep.add_parameter("radius_m", "1000");
    rep.columns = {"path", "median_us", "mean_us", "p95_us", "p99_us"};
    for (const auto& p : b.paths) {
        rep.add_row({p.path, format_fixed(p.median_us, 2), format_fixed(p.mean_us, 2),
                     format_fixed(p.p95_us, 2), format_fixed(p.p99_us, 2)});
    }
    for (const auto& [name, us] : b.sbpp_components_us) {
        rep.add_row({"  sbpp." + name, format_fixed(us, 2), "", "", ""});
    }
    return rep;
}

}  // namespace sbpp::harness
