#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <latch>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <thread>
#include <tuple>

#include "sbpp/corpus.hpp"
#include "sbpp/harness.hpp"

namespace sbpp::harness {

using protocol::reason_name;
using variants::Kind;

namespace {

struct Flow {
    session::SessionTicket ticket;
    variants::Discovery discovery;
    variants::Request request;
};

Flow unlock_flow(variants::Variant& v, const geo::Drop& search_at, double radius_m,
                 const geo::Drop& target, Timestamp now, bool submit = true) {
    Flow f;
    f.ticket = v.open_session(now);
    f.discovery = v.discover(f.ticket, search_at.lat, search_at.lon, radius_m, now);
    f.request = v.prove(f.ticket, f.discovery, target.id, {target.lat, target.lon});
    if (submit && !v.verify(f.request, now + 1).accepted) {
        throw Error("honest unlock rejected in experiment setup");
    }
    return f;
}

std::vector<std::string> ids_of(const variants::Discovery& d) {
    std::vector<std::string> ids;
    for (const auto& c : d.candidates) ids.push_back(c.id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::string reasons_text(const std::map<std::string, std::size_t>& reasons) {
    std::string out;
    for (const auto& [k, n] : reasons) {
        if (!out.empty()) out += "; ";
        out += k + ":" + std::to_string(n);
    }
    return out.empty() ? "-" : out;
}

std::string ratio(std::size_t a, std::size_t b) { return std::to_string(a) + "/" + std::to_string(b); }

Bytes lp(std::initializer_list<ByteView> fields) {
    canon::Message m;
    for (auto f : fields) m.add(f);
    return m.encode();
}

/// Applies `fault` to an honest record. `other` is a record from a different
/// session for the same drop; `ids` is the honest result set.
variants::EvidenceRecord inject(Fault fault, const variants::EvidenceRecord& honest,
                                const variants::EvidenceRecord& other,
                                std::vector<std::string> ids, std::size_t i) {
    auto rec = honest;
    auto rogue = receipt::SigningKey::from_seed(0xBAD0000ULL + i);
    ids.push_back("zz-injected-" + std::to_string(i));
    std::sort(ids.begin(), ids.end());
    auto altered = merkle::MerkleTree::build(ids);

    if (honest.kind == Kind::V8) {
        auto token = canon::lp_decode(honest.evidence);
        auto content = canon::lp_decode(token.at(0));
        switch (fault) {
            case Fault::SessionRebinding: rec.evidence = other.evidence; break;
            case Fault::ResultSetTampering: {
                content.at(3) = to_bytes(altered.root());
                rec.evidence = lp({canon::lp_encode(content), token.at(1)});
                break;
            }
            case Fault::ForgedAuthorization:
                rec.evidence = lp({token.at(0), rogue.sign(token.at(0))});
                break;
        }
        return rec;
    }

    switch (fault) {
        case Fault::SessionRebinding: rec.evidence = other.evidence; break;
        case Fault::ResultSetTampering: rec.path = altered.prove(honest.drop); break;
        case Fault::ForgedAuthorization: {
            auto r = receipt::Receipt::parse(honest.evidence);
            rec.evidence = receipt::sign_receipt(rogue, r.fields).serialize();
            break;
        }
    }
    return rec;
}

}  // namespace

std::string_view fault_name(Fault f) {
    switch (f) {
        case Fault::SessionRebinding: return "session-rebinding";
        case Fault::ResultSetTampering: return "result-set-tampering";
        case Fault::ForgedAuthorization: return "forged-authorization";
    }
    return "?";
}

// ---- audit replay ------------------------------------------------------------

AuditReplayResult run_audit_replay(std::uint64_t seed, std::size_t sessions) {
    auto env = make_attack_environment(seed);
    AuditReplayResult out;
    out.sessions = sessions;

    for (Kind kind : {Kind::V4b, Kind::V4a, Kind::V8}) {
        auto v = variants::make_variant(kind, env.variant_config());
        std::vector<variants::EvidenceRecord> records;
        std::vector<std::vector<std::string>> result_sets;
        for (std::size_t i = 0; i < sessions; ++i) {
            auto t = kBaseTime + static_cast<Timestamp>(i) * 10;
            auto f = unlock_flow(*v, env.home_primary, env.search_radius_m, env.home_primary, t);
            records.push_back(v->record(f.discovery, f.request));
            result_sets.push_back(ids_of(f.discovery));
        }
        v->purge_state();

        if (kind == Kind::V4b) {
            for (const auto& r : records) out.full_pass += v->audit(r).accepted ? 1 : 0;
        } else if (kind == Kind::V4a) {
            for (const auto& r : records) {
                auto o = v->audit(r);
                if (o.accepted) ++out.core_pass;
                else ++out.core_reasons[std::string(reason_name(o.reason))];
            }
            continue;
        }

        for (Fault fault : {Fault::SessionRebinding, Fault::ResultSetTampering, Fault::ForgedAuthorization}) {
            FaultRow row{fault, kind, sessions, 0, {}};
            for (std::size_t i = 0; i < sessions; ++i) {
                const auto& other = records[(i + 1) % sessions];
                auto o = v->audit(inject(fault, records[i], other, result_sets[i], i));
                if (!o.accepted) {
                    ++row.rejected;
                    ++row.reasons[std::string(reason_name(o.reason))];
                }
            }
            out.faults.push_back(std::move(row));
        }
    }
    return out;
}

ExperimentReport audit_replay_report(const AuditReplayResult& r, std::uint64_t seed) {
    ExperimentReport rep;
    rep.name = "audit_replay";
    rep.add_parameter("seed", std::to_string(seed));
    rep.add_parameter("sessions", std::to_string(r.sessions));
    rep.add_parameter("state", "purged before audit");
    rep.columns = {"case", "variant", "outcome", "reasons"};
    rep.add_row({"honest records", "V4b", ratio(r.full_pass, r.sessions) + " pass", "-"});
    rep.add_row({"honest records", "V4a", ratio(r.core_pass, r.sessions) + " pass", reasons_text(r.core_reasons)});
    for (const auto& f : r.faults) {
        rep.add_row({std::string(fault_name(f.fault)), std::string(variants::kind_name(f.variant)),
                     ratio(f.rejected, f.injections) + " rejected", reasons_text(f.reasons)});
    }
    return rep;
}

// ---- re-association ------------------------------------------------------------

double analytic_reassociation_rate(std::size_t drops, std::size_t epoch_every, std::size_t sessions) {
    if (sessions == 0 || drops == 0) return 0;
    std::size_t k = epoch_every == 0 ? sessions : epoch_every;
    double miss = 1.0 - 1.0 / static_cast<double>(drops);
    double total = 0;
    for (std::size_t start = 0; start < sessions; start += k) {
        std::size_t m = std::min(k, sessions - start);
        total += static_cast<double>(m) * (1.0 - std::pow(miss, static_cast<double>(m - 1)));
    }
    return total / static_cast<double>(sessions);
}

std::vector<ReassocResult> run_reassociation(const ReassocConfig& config,
                                             const std::vector<Kind>& kinds) {
    constexpr double kCenterLat = 35.6812, kCenterLon = 139.7671;
    std::vector<geo::Drop> drops;
    for (std::size_t i = 0; i < config.drops; ++i) {
        double a = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(config.drops);
        char id[16];
        std::snprintf(id, sizeof id, "pop-%03zu", i);
        drops.push_back(offset(id, kCenterLat, kCenterLon, 40 * std::cos(a), 40 * std::sin(a)));
    }
    geo::Drop center{"center", kCenterLat, kCenterLon};

    std::vector<ReassocResult> out;
    for (Kind kind : kinds) {
        variants::VariantConfig vc;
        vc.drops = drops;
        vc.search_key = canon::sha256(canon::Message{"reassoc-search-key"}.encode());
        vc.seed = config.seed;
        vc.epoch_every = config.epoch_every;
        auto v = variants::make_variant(kind, vc);

        std::mt19937_64 gen(config.seed);
        std::uniform_int_distribution<std::size_t> pick(0, config.drops - 1);
        std::vector<variants::EvidenceRecord> records;
        for (std::size_t i = 0; i < config.sessions; ++i) {
            auto t = kBaseTime + static_cast<Timestamp>(i) * 10;
            auto f = unlock_flow(*v, center, 300.0, drops[pick(gen)], t);
            records.push_back(v->record(f.discovery, f.request));
        }
        v->purge_state();

        // Each record is spliced with the proof of one other record sharing (D, pv, e).
        std::map<std::tuple<std::string, std::string, std::string>, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < records.size(); ++i) {
            groups[{records[i].drop, records[i].pv, records[i].epoch}].push_back(i);
        }
        ReassocResult r{kind, config.sessions, 0, 0,
                        analytic_reassociation_rate(config.drops, config.epoch_every, config.sessions)};
        for (std::size_t i = 0; i < records.size(); ++i) {
            const auto& g = groups[{records[i].drop, records[i].pv, records[i].epoch}];
            auto partner = std::find_if(g.begin(), g.end(), [&](std::size_t j) { return j != i; });
            if (partner == g.end()) continue;
            auto spliced = records[i];
            spliced.pub = records[*partner].pub;
            spliced.proof = records[*partner].proof;
            if (v->audit(spliced).accepted) ++r.successes;
        }
        r.rate = static_cast<double>(r.successes) / static_cast<double>(config.sessions);
        out.push_back(r);
    }
    return out;
}

ExperimentReport reassociation_report(const std::vector<ReassocResult>& results,
                                      const ReassocConfig& config) {
    ExperimentReport rep;
    rep.name = "reassociation";
    rep.add_parameter("seed", std::to_string(config.seed));
    rep.add_parameter("sessions", std::to_string(config.sessions));
    rep.add_parameter("drop popularity", "uniform over " + std::to_string(config.drops) + " drops");
    rep.add_parameter("epoch rotation", "every " + std::to_string(config.epoch_every) + " sessions");
    rep.columns = {"variant", "successes", "rate", "analytic (no binding)"};
    for (const auto& r : results) {
        rep.add_row({std::string(variants::kind_name(r.variant)), ratio(r.successes, r.sessions),
                     format_fixed(r.rate, 4), format_fixed(r.analytic, 4)});
    }
    return rep;
}

// ---- atomicity and isolation -------------------------------------------------

std::vector<AtomicityRow> run_atomicity(std::uint64_t seed) {
    auto env = make_attack_environment(seed);
    const auto& home = env.home_primary;
    const double radius = env.search_radius_m;
    std::vector<AtomicityRow> rows;
    auto v = variants::make_variant(Kind::V4b, env.variant_config());
    Timestamp t = kBaseTime;

    {
        AtomicityRow row{"sequential double-submit", 1000, 0, ""};
        for (std::size_t i = 0; i < row.trials; ++i, t += 10) {
            auto f = unlock_flow(*v, home, radius, home, t, false);
            auto a = v->verify(f.request, t + 1);
            auto b = v->verify(f.request, t + 2);
            if (!a.accepted || b.accepted || b.reason != protocol::FailReason::Consumed) ++row.violations;
        }
        row.detail = "second submit rejected as consumed";
        rows.push_back(row);
    }
    {
        AtomicityRow row{"parallel double-submit", 1000, 0, ""};
        for (std::size_t i = 0; i < row.trials; ++i, t += 10) {
            auto f = unlock_flow(*v, home, radius, home, t, false);
            std::latch start(2);
            std::array<bool, 2> accepted{};
            {
                std::array<std::jthread, 2> submitters;
                for (std::size_t k = 0; k < 2; ++k) {
                    submitters[k] = std::jthread([&, k] {
                        start.arrive_and_wait();
                        accepted[k] = v->verify(f.request, t + 1).accepted;
                    });
                }
            }
            if (accepted[0] == accepted[1]) ++row.violations;
        }
        row.detail = "exactly one of two concurrent submits accepted";
        rows.push_back(row);
    }
    {
        AtomicityRow row{"expiry boundary", 1000, 0, ""};
        for (std::size_t i = 0; i < row.trials; ++i, t += 10) {
            auto before = unlock_flow(*v, home, radius, home, t, false);
            auto at = unlock_flow(*v, home, radius, home, t, false);
            bool ok = v->verify(before.request, before.ticket.expires_at - 1).accepted;
            auto late = v->verify(at.request, at.ticket.expires_at);
            if (!ok || late.accepted || late.reason != protocol::FailReason::Expired) ++row.violations;
        }
        row.detail = "accepted at t_exp-1, expired at t_exp";
        rows.push_back(row);
    }
    {
        // Fresh instance so the counts cover exactly these sessions.
        auto lv = variants::make_variant(Kind::V4b, env.variant_config());
        AtomicityRow row{"bulk lifecycle", 10000, 0, ""};
        const Timestamp early = kBaseTime, late = kBaseTime + 10'000;
        std::size_t want_consumed = 0, want_expired = 0, want_pending = 0;
        for (std::size_t i = 0; i < row.trials; ++i) {
            bool first_half = i < row.trials / 2;
            Timestamp at = first_half ? early : late;
            if (i == row.trials / 2) lv->store().purge_expired(late);
            if (i % 3 == 0) {
                unlock_flow(*lv, home, radius, home, at);
                ++want_consumed;
            } else {
                lv->open_session(at);
                ++(first_half ? want_expired : want_pending);
            }
        }
        auto s = lv->store().stats(late + 1);
        bool conserved = s.issued == s.consumed + s.expired + s.pending + s.discarded;
        bool exact = s.issued == row.trials && s.consumed == want_consumed && s.expired == want_expired &&
                     s.pending == want_pending && s.discarded == 0;
        row.violations = (conserved && exact) ? 0 : 1;
        row.detail = "issued " + std::to_string(s.issued) + " = consumed " + std::to_string(s.consumed) +
                     " + expired " + std::to_string(s.expired) + " + pending " + std::to_string(s.pending);
        rows.push_back(row);
    }
    {
        AtomicityRow row{"cross-access", 0, 0, ""};
        std::vector<Flow> flows;
        for (std::size_t i = 0; i < 100; ++i) {
            flows.push_back(unlock_flow(*v, home, radius, home, t, false));
        }
        for (std::size_t i = 0; i < flows.size(); ++i) {
            for (std::size_t j = 0; j < flows.size(); ++j) {
                if (i == j) continue;
                auto req = flows[i].request;
                req.session_id = flows[j].ticket.id;
                ++row.trials;
                if (v->verify(req, t + 1).accepted) ++row.violations;
            }
        }
        row.detail = "requests submitted under another client's session";
        rows.push_back(row);
    }
    return rows;
}

ExperimentReport atomicity_report(const std::vector<AtomicityRow>& rows, std::uint64_t seed) {
    ExperimentReport rep;
    rep.name = "atomicity";
    rep.add_parameter("seed", std::to_string(seed));
    rep.columns = {"scenario", "trials", "violations", "detail"};
    for (const auto& r : rows) {
        rep.add_row({r.scenario, std::to_string(r.trials), std::to_string(r.violations), r.detail});
    }
    return rep;
}

// ---- malicious server ------------------------------------------------------------

std::vector<MaliciousRow> run_malicious_server(std::uint64_t seed, std::size_t trials) {
    auto env = make_attack_environment(seed);
    auto keys = nizk::setup(seed);
    auto prover = std::make_shared<nizk::SimulatedProver>(keys.proving_key);
    auto verifier = std::make_shared<nizk::SimulatedVerifier>(keys.verifying_key);
    auto signing = receipt::SigningKey::from_seed(seed);
    const auto& home = env.home_primary;
    nizk::Witness at_home{home.lat, home.lon};
    protocol::Client client(env.search_key, prover);
    auto home_tokens = client.tokens(home.lat, home.lon, env.search_radius_m);

    auto server = [&](std::function<void(protocol::ServerConfig&)> tweak,
                      std::shared_ptr<RandomSource> rng = nullptr) {
        protocol::ServerConfig c;
        c.unlock_radius_m = env.unlock_radius_m;
        if (tweak) tweak(c);
        if (!rng) rng = std::make_shared<SeededRandom>(seed, "malicious-server");
        return std::make_unique<protocol::Server>(c, env.drops, env.search_key, signing, verifier, rng);
    };
    auto reference = server(nullptr);
    std::vector<MaliciousRow> rows;

    {
        MaliciousRow row{"candidate omission", trials, 0, 0, "receipt root compared with an honest reference root"};
        auto srv = server([&](auto& c) {
            c.result_filter = [&](std::vector<std::string> ids) {
                std::erase(ids, home.id);
                return ids;
            };
        });
        for (std::size_t i = 0; i < trials; ++i) {
            Timestamp t = kBaseTime + static_cast<Timestamp>(i) * 10;
            auto s = srv->init_session(t);
            auto resp = srv->search(s.id, home_tokens, t);
            auto ref = reference->search(reference->init_session(t).id, home_tokens, t);
            auto ids = resp.ids();
            if (std::find(ids.begin(), ids.end(), home.id) == ids.end()) ++row.attack_succeeded;
            if (resp.root != ref.root) ++row.detected;
        }
        rows.push_back(row);
    }
    {
        MaliciousRow row{"biased root signing", trials, 0, 0, "audit authenticates what was issued"};
        auto srv = server([&](auto& c) {
            c.result_filter = [&](std::vector<std::string> ids) {
                ids.push_back(env.remote.id);
                std::sort(ids.begin(), ids.end());
                return ids;
            };
        });
        for (std::size_t i = 0; i < trials; ++i) {
            Timestamp t = kBaseTime + static_cast<Timestamp>(i) * 10;
            auto s = srv->init_session(t);
            auto resp = srv->search(s.id, home_tokens, t);
            auto req = client.prove(s, resp, home.id, at_home);
            bool granted = srv->verify(req, t + 1).accepted;
            auto rec = protocol::emit_audit_record(*resp.receipt, req);
            bool audited = protocol::audit(srv->public_key(), *verifier, rec).accepted;
            auto ids = resp.ids();
            bool biased = std::find(ids.begin(), ids.end(), env.remote.id) != ids.end();
            if (granted && audited && biased) ++row.attack_succeeded;
            if (!audited) ++row.detected;
        }
        rows.push_back(row);
    }

    // A proof computed ahead of time for a predicted session, later submitted
    // by a different (remote) user who opens that session.
    auto transfer = [&](std::shared_ptr<RandomSource> rng, const char* label, const char* note) {
        auto predictable = std::make_shared<PredictableRandom>();
        bool weak = rng == nullptr;
        auto srv = server(nullptr, weak ? std::shared_ptr<RandomSource>(predictable) : rng);
        MaliciousRow row{label, trials, 0, 0, note};
        // The honest result set for the home query is public knowledge.
        auto ref = reference->search(reference->init_session(kBaseTime).id, home_tokens, kBaseTime);
        auto root = *ref.root;
        auto tree = merkle::MerkleTree::build(ref.ids());
        for (std::size_t i = 0; i < trials; ++i) {
            Timestamp t = kBaseTime + static_cast<Timestamp>(i) * 10;
            std::uint64_t pos = predictable->position();
            auto id_block = PredictableRandom::block(pos);
            std::string predicted_id = to_hex(ByteView(id_block.data(), session::kSessionIdBytes));
            Nonce predicted_nonce = PredictableRandom::block(pos + 1);

            // Accomplice standing at the drop.
            auto cd = canon::cd_full(home.id, "1", "ep0", predicted_nonce, root);
            protocol::UnlockRequest req;
            req.session_id = predicted_id;
            req.drop = home.id;
            req.pub = nizk::make_public_inputs(home.lat, home.lon, env.unlock_radius_m, cd);
            req.proof = prover->prove(at_home, req.pub);
            req.path = tree.prove(home.id);

            // Remote user, later.
            auto s = srv->init_session(t + 5);
            srv->search(s.id, home_tokens, t + 5);
            req.session_id = s.id;
            if (srv->verify(req, t + 6).accepted) ++row.attack_succeeded;
        }
        return row;
    };
    rows.push_back(transfer(nullptr, "predictable nonce (weakened issuer)",
                            "precomputed proof transferred to another user"));
    rows.push_back(transfer(std::make_shared<SeededRandom>(seed ^ 0x9e3779b97f4a7c15ULL, "unpredictable"),
                            "predictable nonce (random issuer)", "same transfer against random nonces"));
    {
        MaliciousRow row{"session refusal", trials, 0, 0, "no session, no receipt, nothing to audit"};
        auto srv = server([](auto& c) { c.refuse_sessions = true; });
        for (std::size_t i = 0; i < trials; ++i) {
            try {
                srv->init_session(kBaseTime);
            } catch (const protocol::SessionRefused&) {
                ++row.attack_succeeded;
            }
        }
        rows.push_back(row);
    }
    {
        MaliciousRow row{"authorization forgery", trials, 0, 0, "receipt signed without the server key"};
        SeededRandom rnd(seed, "forgery");
        auto ids = reference->search(reference->init_session(kBaseTime).id, home_tokens, kBaseTime).ids();
        auto tree = merkle::MerkleTree::build(ids);
        for (std::size_t i = 0; i < trials; ++i) {
            auto rogue = receipt::SigningKey::from_seed(0xF0F0ULL + i);
            receipt::ReceiptFields f;
            std::array<std::uint8_t, session::kSessionIdBytes> sid{};
            rnd.fill(sid);
            f.session_id = to_hex(sid);
            f.nonce = rnd.next32();
            f.expires_at = kBaseTime + 300;
            f.root = tree.root();
            f.pv = "1";
            f.epoch = "ep0";
            auto forged = receipt::sign_receipt(rogue, f);
            protocol::UnlockRequest req;
            req.session_id = f.session_id;
            req.drop = home.id;
            req.pub = nizk::make_public_inputs(home.lat, home.lon, env.unlock_radius_m,
                                               canon::cd_full(home.id, f.pv, f.epoch, f.nonce, f.root));
            req.proof = prover->prove(at_home, req.pub);
            req.path = tree.prove(home.id);
            bool audited = protocol::audit(signing.public_key(), *verifier,
                                           protocol::emit_audit_record(forged, req)).accepted;
            bool granted = reference->verify(req, kBaseTime + 1).accepted;
            if (audited || granted) ++row.attack_succeeded;
            if (!audited) ++row.detected;
        }
        rows.push_back(row);
    }
    return rows;
}

ExperimentReport malicious_server_report(const std::vector<MaliciousRow>& rows, std::uint64_t seed) {
    ExperimentReport rep;
    rep.name = "malicious_server";
    rep.add_parameter("seed", std::to_string(seed));
    rep.columns = {"behavior", "trials", "succeeded", "detected", "note"};
    for (const auto& r : rows) {
        rep.add_row({r.behavior, std::to_string(r.trials), std::to_string(r.attack_succeeded),
                     std::to_string(r.detected), r.note});
    }
    return rep;
}

// ---- search quality ----------------------------------------------------------------

SearchQuality run_search_quality(std::uint64_t seed, std::size_t n, std::size_t queries,
                                 double radius_m) {
    auto started = std::chrono::steady_clock::now();
    auto drops = geo::generate_uniform(n, geo::kTokyoBox, seed);
    Hash32 key = canon::sha256(canon::Message{"search-quality-key"}.add(std::to_string(seed)).encode());
    int p = geo::precision_for_radius(radius_m);
    auto index = geo::GeoIndex::build(drops, key, {p});
    auto keys = nizk::setup(seed);
    protocol::Client sbpp_client(key, std::make_shared<nizk::SimulatedProver>(keys.proving_key));

    SearchQuality q;
    q.drops = n;
    q.queries = queries;
    q.radius_m = radius_m;
    q.precision = p;
    std::mt19937_64 gen(seed + 1);
    std::uniform_real_distribution<double> lat_d(geo::kTokyoBox.lat_min, geo::kTokyoBox.lat_max);
    std::uniform_real_distribution<double> lon_d(geo::kTokyoBox.lon_min, geo::kTokyoBox.lon_max);
    double jaccard_sum = 0;
    for (std::size_t i = 0; i < queries; ++i) {
        double lat = lat_d(gen), lon = lon_d(gen);
        auto gridse = geo::client_tokens(key, lat, lon, radius_m);
        auto sbpp = sbpp_client.tokens(lat, lon, radius_m);
        std::set<Hash32> a, b;
        for (const auto& t : gridse) a.insert(t.tag);
        for (const auto& t : sbpp) b.insert(t.tag);
        std::size_t inter = 0;
        for (const auto& x : a) inter += b.count(x);
        jaccard_sum += static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);

        auto matched = index.match(gridse);
        std::set<std::string> got(matched.begin(), matched.end());
        q.returned += got.size();
        for (const auto& d : drops) {
            if (geo::haversine_m(lat, lon, d.lat, d.lon) > radius_m) continue;
            ++q.relevant;
            if (got.count(d.id)) ++q.hits;
        }
    }
    q.recall = q.relevant ? static_cast<double>(q.hits) / static_cast<double>(q.relevant) : 1.0;
    q.precision_score = q.returned ? static_cast<double>(q.hits) / static_cast<double>(q.returned) : 0.0;
    q.mean_jaccard_v2_v4b = queries ? jaccard_sum / static_cast<double>(queries) : 0.0;
    q.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return q;
}

ExperimentReport search_quality_report(const SearchQuality& q, std::uint64_t seed) {
    ExperimentReport rep;
    rep.name = "search_quality";
    rep.add_parameter("seed", std::to_string(seed));
    rep.add_parameter("drops", std::to_string(q.drops) + " uniform in the Tokyo box");
    rep.add_parameter("queries", std::to_string(q.queries));
    rep.add_parameter("radius_m", format_fixed(q.radius_m, 0));
    rep.columns = {"metric", "value"};
    rep.add_row({"geohash precision", std::to_string(q.precision)});
    rep.add_row({"in-radius pairs", std::to_string(q.relevant)});
    rep.add_row({"returned", std::to_string(q.returned)});
    rep.add_row({"recall", format_fixed(q.recall, 4)});
    rep.add_row({"precision", format_fixed(q.precision_score, 4)});
    rep.add_row({"query jaccard GridSE vs SBPP", format_fixed(q.mean_jaccard_v2_v4b, 4)});
    rep.add_row({"seconds", format_fixed(q.seconds, 3)});
    return rep;
}

}  // namespace sbpp::harness
