// sbpp: command-line front end for the protocol library and adversary harness.
//
// Exit codes: 0 success, 1 usage or input error, 2 verification/audit rejection.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "sbpp/corpus.hpp"
#include "sbpp/harness.hpp"

namespace {

using namespace sbpp;

constexpr int kExitUsage = 1;
constexpr int kExitRejected = 2;

struct Common {
    std::uint64_t seed = 1;
    std::string out_dir;
};

struct FlowOptions {
    std::string corpus;
    std::string index;
    std::string key_hex;
    std::string server_secret_hex;
    std::string mode = "full";
    std::string pv = "1";
    std::string epoch_prefix = "ep";
    std::size_t epoch_every = 0;
    Timestamp ttl = session::kDefaultTtlSeconds;
    double radius = 300;
    double unlock_radius = 100;
    std::string precisions = "1,2,3,4,5,6,7,8,9";
};

std::vector<int> parse_precisions(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        std::size_t used = 0;
        int p = std::stoi(item, &used);
        if (used != item.size() || p < geo::kMinPrecision || p > geo::kMaxPrecision) {
            throw Error("bad precision: " + item);
        }
        out.push_back(p);
    }
    if (out.empty()) throw Error("no precisions given");
    return out;
}

Hash32 seeded_key(std::string_view label, std::uint64_t seed) {
    return canon::sha256(canon::Message{label}.add(std::to_string(seed)).encode());
}

Hash32 search_key(const FlowOptions& o, std::uint64_t seed) {
    return o.key_hex.empty() ? seeded_key("sbpp-cli-search-key", seed) : hash32_from_hex(o.key_hex);
}

receipt::SigningKey server_key(const FlowOptions& o, std::uint64_t seed) {
    return o.server_secret_hex.empty() ? receipt::SigningKey::from_seed(seed)
                                       : receipt::SigningKey::from_secret(hash32_from_hex(o.server_secret_hex));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    return {std::istreambuf_iterator<char>(in), {}};
}

void write_file(const std::string& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

void emit(const ExperimentReport& rep, const Common& c) {
    std::cout << rep.to_table();
    if (!c.out_dir.empty()) std::cout << "csv: " << rep.write_csv(c.out_dir).string() << "\n";
}

Timestamp wall_clock() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

struct Demo {
    std::vector<geo::Drop> drops;
    std::unique_ptr<protocol::Server> server;
    std::unique_ptr<protocol::Client> client;
    std::shared_ptr<nizk::SimulatedVerifier> verifier;
};

Demo make_demo(const FlowOptions& o, std::uint64_t seed) {
    Demo d;
    if (o.corpus.empty()) throw Error("--corpus is required");
    d.drops = geo::load_corpus(o.corpus);
    auto key = search_key(o, seed);
    auto keys = nizk::setup(seed);
    d.verifier = std::make_shared<nizk::SimulatedVerifier>(keys.verifying_key);

    protocol::ServerConfig cfg;
    cfg.mode = session::parse_mode(o.mode);
    cfg.pv = o.pv;
    cfg.epoch_prefix = o.epoch_prefix;
    cfg.epoch_every = o.epoch_every;
    cfg.ttl_seconds = o.ttl;
    cfg.unlock_radius_m = o.unlock_radius;
    cfg.precisions = parse_precisions(o.precisions);
    auto rng = std::make_shared<SeededRandom>(seed, "sbpp-cli-sessions");
    auto table = protocol::make_drop_table(d.drops, o.unlock_radius);
    geo::GeoIndex index = o.index.empty() ? geo::GeoIndex::build(d.drops, key, cfg.precisions)
                                          : geo::GeoIndex::deserialize(read_file(o.index));
    d.server = std::make_unique<protocol::Server>(cfg, std::move(index), std::move(table),
                                                  server_key(o, seed), d.verifier, rng);
    d.client = std::make_unique<protocol::Client>(
        key, std::make_shared<nizk::SimulatedProver>(keys.proving_key));
    return d;
}

void add_flow_options(CLI::App* cmd, FlowOptions& o) {
    cmd->add_option("--corpus", o.corpus, "Corpus file (id<TAB>lat<TAB>lon)")->required();
    cmd->add_option("--index", o.index, "Prebuilt index file (default: build from corpus)");
    cmd->add_option("--key-hex", o.key_hex, "32-byte search key (default: derived from --seed)");
    cmd->add_option("--server-secret-hex", o.server_secret_hex, "Ed25519 secret (default: from --seed)");
    cmd->add_option("--mode", o.mode, "core|full")->check(CLI::IsMember({"core", "full"}));
    cmd->add_option("--pv", o.pv, "Policy version");
    cmd->add_option("--epoch-prefix", o.epoch_prefix, "Epoch label prefix");
    cmd->add_option("--epoch-every", o.epoch_every, "Sessions per epoch (0: one epoch)");
    cmd->add_option("--ttl", o.ttl, "Session TTL in seconds")->check(CLI::PositiveNumber);
    cmd->add_option("--radius", o.radius, "Search radius (m)")->check(CLI::PositiveNumber);
    cmd->add_option("--unlock-radius", o.unlock_radius, "Unlock radius (m)")->check(CLI::PositiveNumber);
    cmd->add_option("--precisions", o.precisions, "Indexed precisions, comma separated");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Search-bound proximity proofs: protocol demo and adversary harness"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--seed", common.seed, "Seed for every random choice")->capture_default_str();
    app.add_option("--out-dir", common.out_dir, "Write report CSVs here");

    // gen-corpus
    auto* gen = app.add_subcommand("gen-corpus", "Generate a synthetic drop corpus");
    std::string gen_kind = "uniform", gen_bbox = "35.6,139.6,35.8,139.9", gen_out;
    std::size_t gen_n = 1000;
    gen->add_option("--kind", gen_kind)->check(CLI::IsMember({"uniform", "clustered"}));
    gen->add_option("--n", gen_n)->check(CLI::PositiveNumber);
    gen->add_option("--bbox", gen_bbox, "lat_min,lon_min,lat_max,lon_max");
    gen->add_option("--out", gen_out, "Output file (default: stdout)");

    // index
    auto* idx = app.add_subcommand("index", "Build and serialize the encrypted index");
    FlowOptions idx_o;
    std::string idx_out;
    idx->add_option("--corpus", idx_o.corpus)->required();
    idx->add_option("--key-hex", idx_o.key_hex);
    idx->add_option("--precisions", idx_o.precisions);
    idx->add_option("--out", idx_out, "Output file (default: stdout)");

    // search
    auto* search = app.add_subcommand("search", "Open a session and run one encrypted search");
    FlowOptions s_o;
    double s_lat = 0, s_lon = 0;
    add_flow_options(search, s_o);
    search->add_option("--lat", s_lat)->required();
    search->add_option("--lon", s_lon)->required();

    // unlock
    auto* unlock = app.add_subcommand("unlock", "Run search, prove and verify for one drop");
    FlowOptions u_o;
    double u_lat = 0, u_lon = 0;
    std::string u_drop, u_record;
    Timestamp u_delay = 1;
    add_flow_options(unlock, u_o);
    unlock->add_option("--drop", u_drop)->required();
    unlock->add_option("--lat", u_lat, "Prover position")->required();
    unlock->add_option("--lon", u_lon, "Prover position")->required();
    unlock->add_option("--submit-after", u_delay, "Seconds between search and submit");
    unlock->add_option("--record-out", u_record, "Write the audit record here");

    // audit
    auto* audit = app.add_subcommand("audit", "Audit a record offline");
    std::string a_record, a_pub;
    audit->add_option("--record-file", a_record)->required();
    audit->add_option("--server-pubkey-hex", a_pub)->required();

    // attack-matrix
    auto* matrix = app.add_subcommand("attack-matrix", "Run every attack against every variant");
    std::size_t m_trials = 100;
    std::string m_token = "equivalent";
    matrix->add_option("--trials", m_trials)->check(CLI::PositiveNumber);
    matrix->add_option("--v8-token", m_token)->check(CLI::IsMember({"equivalent", "drop-only"}));

    // bench
    auto* bench = app.add_subcommand("bench", "Benchmarks");
    bench->require_subcommand(1);
    auto* b_merkle = bench->add_subcommand("merkle", "Merkle scaling");
    auto* b_latency = bench->add_subcommand("latency", "Protocol-path latency");
    std::size_t l_drops = 1000, l_iters = 1000, l_warmup = 100;
    b_latency->add_option("--drops", l_drops)->check(CLI::PositiveNumber);
    b_latency->add_option("--iters", l_iters)->check(CLI::PositiveNumber);
    b_latency->add_option("--warmup", l_warmup);

    // experiment
    auto* exp = app.add_subcommand("experiment", "Experiments");
    exp->require_subcommand(1);
    auto* e_reassoc = exp->add_subcommand("reassoc", "Cross-session re-association");
    harness::ReassocConfig rc;
    e_reassoc->add_option("--sessions", rc.sessions)->check(CLI::PositiveNumber);
    e_reassoc->add_option("--drops", rc.drops)->check(CLI::PositiveNumber);
    e_reassoc->add_option("--epoch-every", rc.epoch_every)->check(CLI::PositiveNumber);
    auto* e_audit = exp->add_subcommand("audit-replay", "Offline audit after purge, fault localization");
    std::size_t ar_sessions = 100;
    e_audit->add_option("--sessions", ar_sessions)->check(CLI::PositiveNumber);
    auto* e_atom = exp->add_subcommand("atomicity", "Consumption atomicity and isolation");
    auto* e_mal = exp->add_subcommand("malicious-server", "Dishonest server behaviors");
    std::size_t ms_trials = 100;
    e_mal->add_option("--trials", ms_trials)->check(CLI::PositiveNumber);
    auto* e_quality = exp->add_subcommand("search-quality", "Recall and precision against haversine");
    std::size_t q_drops = 1000, q_queries = 200;
    double q_radius = 1000;
    e_quality->add_option("--drops", q_drops)->check(CLI::PositiveNumber);
    e_quality->add_option("--queries", q_queries)->check(CLI::PositiveNumber);
    e_quality->add_option("--radius", q_radius)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*gen) {
            auto box = geo::parse_bbox(gen_bbox);
            auto drops = gen_kind == "uniform" ? geo::generate_uniform(gen_n, box, common.seed)
                                               : geo::generate_clustered(gen_n, box, common.seed);
            if (gen_out.empty()) std::cout << geo::format_corpus(drops);
            else geo::write_corpus(gen_out, drops);
            return 0;
        }
        if (*idx) {
            auto drops = geo::load_corpus(idx_o.corpus);
            auto index = geo::GeoIndex::build(drops, search_key(idx_o, common.seed),
                                              parse_precisions(idx_o.precisions));
            if (idx_out.empty()) std::cout << index.serialize();
            else write_file(idx_out, index.serialize());
            return 0;
        }
        if (*search) {
            auto demo = make_demo(s_o, common.seed);
            Timestamp now = wall_clock();
            auto ticket = demo.server->init_session(now);
            auto resp = demo.server->search(ticket.id, demo.client->tokens(s_lat, s_lon, s_o.radius), now);
            std::cout << "session " << ticket.id << "\nnonce " << to_hex(ticket.nonce)
                      << "\nexpires_at " << ticket.expires_at << "\nmode " << session::mode_name(resp.mode)
                      << "\npv " << resp.pv << "\nepoch " << resp.epoch << "\n";
            if (resp.root) std::cout << "root " << to_hex(*resp.root) << "\n";
            if (resp.receipt) std::cout << "receipt " << to_hex(resp.receipt->serialize()) << "\n";
            std::cout << "server_pubkey " << demo.server->public_key().to_hex() << "\n";
            std::cout << "candidates " << resp.candidates.size() << "\n";
            for (const auto& c : resp.candidates) {
                std::cout << c.id << "\t" << format_fixed(c.lat, 7) << "\t" << format_fixed(c.lon, 7) << "\t"
                          << format_fixed(c.radius_m, 1) << "\n";
            }
            return 0;
        }
        if (*unlock) {
            auto demo = make_demo(u_o, common.seed);
            Timestamp now = wall_clock();
            auto ticket = demo.server->init_session(now);
            auto resp = demo.server->search(ticket.id, demo.client->tokens(u_lat, u_lon, u_o.radius), now);
            if (!resp.bound()) {
                std::cout << "rejected: no candidates near the search point\n";
                return kExitRejected;
            }
            protocol::UnlockRequest req;
            try {
                req = demo.client->prove(ticket, resp, u_drop, {u_lat, u_lon});
            } catch (const protocol::NotInResults& e) {
                std::cout << "rejected: " << e.what() << "\n";
                return kExitRejected;
            } catch (const nizk::StatementFalse& e) {
                std::cout << "rejected: " << e.what() << "\n";
                return kExitRejected;
            }
            auto outcome = demo.server->verify(req, now + u_delay);
            if (!u_record.empty()) {
                auto rec = protocol::emit_audit_record(*resp.receipt, req).serialize();
                write_file(u_record, std::string_view(reinterpret_cast<const char*>(rec.data()), rec.size()));
            }
            std::cout << "server_pubkey " << demo.server->public_key().to_hex() << "\n";
            if (outcome.accepted) {
                std::cout << "accepted\n";
                return 0;
            }
            std::cout << "rejected: " << protocol::reason_name(outcome.reason) << "\n";
            return kExitRejected;
        }
        if (*audit) {
            auto data = read_file(a_record);
            protocol::AuditRecord rec;
            try {
                rec = protocol::AuditRecord::parse(as_bytes(data));
            } catch (const ParseError& e) {
                std::cerr << "malformed record: " << e.what() << "\n";
                return kExitUsage;
            }
            auto keys = nizk::setup(common.seed);
            nizk::SimulatedVerifier verifier(keys.verifying_key);
            auto outcome = protocol::audit(receipt::PublicKey::from_hex(a_pub), verifier, rec);
            if (outcome.accepted) {
                std::cout << "accepted\n";
                return 0;
            }
            std::cout << "rejected: " << protocol::reason_name(outcome.reason) << "\n";
            return kExitRejected;
        }
        if (*matrix) {
            auto token = m_token == "equivalent" ? variants::TokenContent::Equivalent
                                                 : variants::TokenContent::DropOnly;
            auto started = std::chrono::steady_clock::now();
            auto results = harness::run_attack_matrix(m_trials, common.seed, token);
            auto rep = harness::attack_matrix_report(results, common.seed);
            rep.add_parameter("trials", std::to_string(m_trials));
            rep.add_parameter("v8 token", m_token);
            rep.add_parameter("seconds", format_fixed(std::chrono::duration<double>(
                                                          std::chrono::steady_clock::now() - started)
                                                          .count(),
                                                      2));
            emit(rep, common);
            return 0;
        }
        if (*b_merkle) {
            emit(harness::merkle_bench_report(harness::run_merkle_bench({100, 1000, 5000, 10000, 20000, 50000},
                                                                        common.seed)),
                 common);
            return 0;
        }
        if (*b_latency) {
            emit(harness::latency_report(harness::run_latency_bench(common.seed, l_drops, l_iters, l_warmup)),
                 common);
            return 0;
        }
        if (*e_reassoc) {
            rc.seed = common.seed;
            auto results = harness::run_reassociation(rc, variants::all_kinds());
            emit(harness::reassociation_report(results, rc), common);
            return 0;
        }
        if (*e_audit) {
            emit(harness::audit_replay_report(harness::run_audit_replay(common.seed, ar_sessions), common.seed),
                 common);
            return 0;
        }
        if (*e_atom) {
            emit(harness::atomicity_report(harness::run_atomicity(common.seed), common.seed), common);
            return 0;
        }
        if (*e_mal) {
            emit(harness::malicious_server_report(harness::run_malicious_server(common.seed, ms_trials),
                                                  common.seed),
                 common);
            return 0;
        }
        if (*e_quality) {
            emit(harness::search_quality_report(
                     harness::run_search_quality(common.seed, q_drops, q_queries, q_radius), common.seed),
                 common);
            return 0;
        }
    } catch (const session::SessionError& e) {
        std::cout << "rejected: " << e.what() << "\n";
        return kExitRejected;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
