#include "sbpp/harness.hpp"

namespace sbpp::harness {

using variants::Discovery;
using variants::Request;
using variants::Variant;

namespace {

struct Opened {
    session::SessionTicket ticket;
    Discovery discovery;
};

Opened search_at(Variant& v, const geo::Drop& where, double radius_m, Timestamp now) {
    Opened o;
    o.ticket = v.open_session(now);
    o.discovery = v.discover(o.ticket, where.lat, where.lon, radius_m, now);
    return o;
}

/// Where the honest user stands: a few meters from `near`, varying by trial.
nizk::Witness standing_at(const geo::Drop& near, std::size_t trial) {
    auto p = offset("", near.lat, near.lon, 3.0 + static_cast<double>(trial % 7),
                    -static_cast<double>(trial % 5));
    return {p.lat, p.lon};
}

Request honest_unlock(Variant& v, const Opened& s, const geo::Drop& drop, std::size_t trial,
                      Timestamp now) {
    if (!s.discovery.contains(drop.id)) throw EnvironmentInsufficient(drop.id + " not discovered");
    auto req = v.prove(s.ticket, s.discovery, drop.id, standing_at(drop, trial));
    if (!v.verify(req, now).accepted) throw EnvironmentInsufficient("honest unlock rejected");
    return req;
}

// Proof granted (or about to be granted) in the victim's session, replayed in
// a session the attacker opened far away: once as-is with the session fields
// rebound, once with pub rebuilt for the attacker's session.
bool substitute(Variant& v, const AttackEnvironment& env, std::size_t trial, Timestamp t0,
                bool victim_verifies_first) {
    auto victim = search_at(v, env.home_primary, env.search_radius_m, t0);
    Request stolen;
    if (victim_verifies_first) {
        stolen = honest_unlock(v, victim, env.home_primary, trial, t0 + 1);
    } else {
        stolen = v.prove(victim.ticket, victim.discovery, env.home_primary.id,
                         standing_at(env.home_primary, trial));
    }
    auto attacker = search_at(v, env.remote, env.search_radius_m, t0 + 2);
    if (attacker.discovery.contains(env.home_primary.id)) {
        throw EnvironmentInsufficient("remote search reaches the home drop");
    }

    auto as_is = stolen;
    v.rebind(as_is, attacker.ticket);
    if (v.verify(as_is, t0 + 3).accepted) return false;

    auto rebuilt = stolen;
    v.rebind(rebuilt, attacker.ticket);
    rebuilt.pub = v.public_inputs(attacker.ticket, attacker.discovery, env.home_primary.id);
    return !v.verify(rebuilt, t0 + 4).accepted;
}

bool retarget(Variant& v, const AttackEnvironment& env, std::size_t trial, Timestamp t0) {
    auto s = search_at(v, env.home_primary, env.search_radius_m, t0);
    if (!s.discovery.contains(env.home_secondary.id)) {
        throw EnvironmentInsufficient("second home drop not discovered");
    }
    auto w = standing_at(env.home_primary, trial);
    auto req = v.prove(s.ticket, s.discovery, env.home_primary.id, w);
    req.drop = env.home_secondary.id;
    req.path = v.prove(s.ticket, s.discovery, env.home_secondary.id, w).path;
    return !v.verify(req, t0 + 1).accepted;
}

bool non_member(Variant& v, const AttackEnvironment& env, std::size_t trial, Timestamp t0) {
    auto s = search_at(v, env.home_primary, env.search_radius_m, t0);
    if (s.discovery.contains(env.remote.id)) throw EnvironmentInsufficient("remote drop discovered");
    // The attacker is physically at D3, so the proximity statement is true.
    auto req = v.build_request(s.ticket, s.discovery, env.remote.id, standing_at(env.remote, trial));
    return !v.verify(req, t0 + 1).accepted;
}

bool audit_splice(Variant& v, const AttackEnvironment& env, std::size_t trial, Timestamp t0) {
    auto s1 = search_at(v, env.home_primary, env.search_radius_m, t0);
    auto r1 = honest_unlock(v, s1, env.home_primary, trial, t0 + 1);
    auto s2 = search_at(v, env.home_primary, env.search_radius_m, t0 + 2);
    auto r2 = honest_unlock(v, s2, env.home_primary, trial + 1, t0 + 3);
    auto rec1 = v.record(s1.discovery, r1);
    auto rec2 = v.record(s2.discovery, r2);
    if (rec1.drop != rec2.drop || rec1.pv != rec2.pv || rec1.epoch != rec2.epoch) {
        throw EnvironmentInsufficient("sessions do not share (D, pv, e)");
    }
    v.purge_state();

    bool honest_passes = v.audit(rec2).accepted;
    auto spliced = rec2;
    spliced.pub = rec1.pub;
    spliced.proof = rec1.proof;
    bool splice_passes = v.audit(spliced).accepted;
    return honest_passes && !splice_passes;
}

bool delayed(Variant& v, const AttackEnvironment& env, std::size_t trial, Timestamp t0) {
    auto s = search_at(v, env.home_primary, env.search_radius_m, t0);
    auto req = v.prove(s.ticket, s.discovery, env.home_primary.id, standing_at(env.home_primary, trial));
    return !v.verify(req, s.ticket.expires_at).accepted;
}

}  // namespace

std::string_view attack_name(Attack a) {
    switch (a) {
        case Attack::A1: return "A1";
        case Attack::A2: return "A2";
        case Attack::A3: return "A3";
        case Attack::A4a: return "A4a";
        case Attack::A4b: return "A4b";
        case Attack::A5: return "A5";
    }
    return "?";
}

const std::vector<Attack>& all_attacks() {
    static const std::vector<Attack> attacks = {Attack::A1,  Attack::A2,  Attack::A3,
                                                Attack::A4a, Attack::A4b, Attack::A5};
    return attacks;
}

bool run_attack(Variant& variant, Attack attack, const AttackEnvironment& env, std::size_t trial) {
    Timestamp t0 = kBaseTime + static_cast<Timestamp>(trial) * 10'000;
    switch (attack) {
        case Attack::A1: return substitute(variant, env, trial, t0, true);
        case Attack::A2: return substitute(variant, env, trial, t0, false);
        case Attack::A3: return retarget(variant, env, trial, t0);
        case Attack::A4a: return non_member(variant, env, trial, t0);
        case Attack::A4b: return audit_splice(variant, env, trial, t0);
        case Attack::A5: return delayed(variant, env, trial, t0);
    }
    throw Error("unknown attack");
}

std::vector<AttackResult> run_attack_matrix(std::size_t trials, std::uint64_t seed,
                                            variants::TokenContent v8_token) {
    auto env = make_attack_environment(seed);
    std::vector<AttackResult> out;
    for (auto kind : variants::all_kinds()) {
        auto variant = variants::make_variant(kind, env.variant_config(v8_token));
        for (auto attack : all_attacks()) {
            AttackResult r{kind, attack, trials, 0, 0};
            for (std::size_t t = 0; t < trials; ++t) {
                try {
                    if (run_attack(*variant, attack, env, t)) ++r.blocked;
                } catch (const EnvironmentInsufficient&) {
                    ++r.skipped;
                }
            }
            out.push_back(r);
        }
    }
    return out;
}

ExperimentReport attack_matrix_report(const std::vector<AttackResult>& results, std::uint64_t seed) {
    ExperimentReport rep;
    rep.name = "attack_matrix";
    rep.add_parameter("seed", std::to_string(seed));
    rep.add_parameter("cell", "✓ = blocked in every trial, × = attack succeeded");
    rep.columns.push_back("attack");
    for (auto k : variants::all_kinds()) rep.columns.emplace_back(variants::kind_name(k));
    for (auto a : all_attacks()) {
        std::vector<std::string> row{std::string(attack_name(a))};
        for (auto k : variants::all_kinds()) {
            std::string cell = "-";
            for (const auto& r : results) {
                if (r.variant != k || r.attack != a) continue;
                std::size_t ran = r.trials - r.skipped;
                const char* mark = r.skipped ? "skip" : r.blocked == ran ? "✓" : r.blocked == 0 ? "×" : "~";
                cell = std::string(mark) + " " + std::to_string(r.blocked) + "/" + std::to_string(ran);
            }
            row.push_back(cell);
        }
        rep.add_row(std::move(row));
    }
    return rep;
}

}  // namespace sbpp::harness
