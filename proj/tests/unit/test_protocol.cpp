#include <gtest/gtest.h>

#include <random>
#include <set>

#include "sbpp/corpus.hpp"
#include "sbpp/protocol.hpp"

using namespace sbpp;
using namespace sbpp::protocol;

namespace {

constexpr Timestamp kNow = 1'700'000'000;

struct World {
    std::vector<geo::Drop> drops = geo::generate_uniform(400, geo::kTokyoBox, 21);
    Hash32 key = canon::sha256(as_bytes("protocol-test-key"));
    nizk::SimulatedKeys keys = nizk::setup(7);
    std::shared_ptr<nizk::SimulatedVerifier> verifier =
        std::make_shared<nizk::SimulatedVerifier>(keys.verifying_key);
    Server server;
    Client client{key, std::make_shared<nizk::SimulatedProver>(keys.proving_key)};

    explicit World(session::Mode mode = session::Mode::FullCompact, ServerConfig cfg = {})
        : server(with_mode(std::move(cfg), mode), drops, key, receipt::SigningKey::from_seed(7),
                 verifier, std::make_shared<SeededRandom>(3)) {}

    static ServerConfig with_mode(ServerConfig c, session::Mode m) {
        c.mode = m;
        return c;
    }

    struct Session {
        session::SessionTicket ticket;
        SearchResponse response;
    };

    /// Opens a session and searches 1 km around drop `i`.
    Session search_near(std::size_t i, Timestamp now = kNow) {
        Session s;
        s.ticket = server.init_session(now);
        s.response = server.search(s.ticket.id, client.tokens(drops[i].lat, drops[i].lon, 1000), now);
        return s;
    }

    UnlockRequest prove_at(const Session& s, const std::string& drop) {
        const auto& c = server.drops().at(drop);
        return client.prove(s.ticket, s.response, drop, {c.lat, c.lon});
    }
};

FailReason reason(const Outcome& o) { return o.reason; }

}  // namespace

TEST(Protocol, HonestFlowFull) {
    World w;
    auto s = w.search_near(0);
    ASSERT_TRUE(s.response.bound());
    ASSERT_TRUE(s.response.root.has_value());
    EXPECT_EQ(s.response.receipt->fields.root, *s.response.root);
    auto req = w.prove_at(s, w.drops[0].id);
    EXPECT_EQ(w.server.verify(req, kNow + 10), Outcome::accept());
}

TEST(Protocol, HonestFlowCore) {
    World w(session::Mode::CoreStateful);
    auto s = w.search_near(0);
    EXPECT_FALSE(s.response.root.has_value());
    auto req = w.prove_at(s, w.drops[0].id);
    EXPECT_FALSE(req.path.has_value());
    EXPECT_EQ(w.server.verify(req, kNow + 10), Outcome::accept());
}

TEST(Protocol, ReplayIsRejected) {
    World w;
    auto s = w.search_near(1);
    auto req = w.prove_at(s, w.drops[1].id);
    ASSERT_TRUE(w.server.verify(req, kNow).accepted);
    EXPECT_EQ(reason(w.server.verify(req, kNow)), FailReason::Consumed);
}

TEST(Protocol, ExpiryIsExclusive) {
    World w;
    auto s = w.search_near(2);
    auto req = w.prove_at(s, w.drops[2].id);
    EXPECT_EQ(reason(w.server.verify(req, s.ticket.expires_at)), FailReason::Expired);
    World w2;
    auto s2 = w2.search_near(2);
    EXPECT_TRUE(w2.server.verify(w2.prove_at(s2, w2.drops[2].id), s2.ticket.expires_at - 1).accepted);
}

TEST(Protocol, UnknownOrUnsearchedSession) {
    World w;
    auto t = w.server.init_session(kNow);
    auto s = w.search_near(3);
    auto req = w.prove_at(s, w.drops[3].id);
    auto unbound = req;
    unbound.session_id = t.id;
    EXPECT_EQ(reason(w.server.verify(unbound, kNow)), FailReason::SessionInvalid);
    unbound.session_id = "deadbeef";
    EXPECT_EQ(reason(w.server.verify(unbound, kNow)), FailReason::SessionInvalid);
}

TEST(Protocol, SecondSearchOnSessionRefused) {
    World w;
    auto s = w.search_near(0);
    EXPECT_THROW(w.server.search(s.ticket.id, w.client.tokens(35.7, 139.7, 1000), kNow), session::SessionError);
}

// A proof produced in one session is useless in another, as-is or relabelled.
TEST(ProtocolProperty, ProofsDoNotTransferAcrossSessions) {
    for (auto mode : {session::Mode::FullCompact, session::Mode::CoreStateful}) {
        World w(mode);
        for (std::size_t i = 0; i < 100; ++i) {
            auto victim = w.search_near(i);
            auto attacker = w.search_near(i);
            auto req = w.prove_at(victim, w.drops[i].id);
            req.session_id = attacker.ticket.id;
            ASSERT_EQ(reason(w.server.verify(req, kNow)), FailReason::NonceDigestMismatch) << i;
            // The victim's own session still accepts it.
            req.session_id = victim.ticket.id;
            ASSERT_TRUE(w.server.verify(req, kNow).accepted) << i;
        }
    }
}

// A proof for one drop cannot be re-labelled as another drop in the same session.
TEST(ProtocolProperty, ProofsDoNotTransferAcrossDrops) {
    World w;
    std::size_t tried = 0;
    for (std::size_t i = 0; i < w.drops.size() && tried < 100; ++i) {
        auto s = w.search_near(i);
        auto ids = s.response.ids();
        if (ids.size() < 2) continue;
        auto other = ids[0] == w.drops[i].id ? ids[1] : ids[0];
        auto req = w.prove_at(s, w.drops[i].id);
        auto honest_other = w.prove_at(s, other);
        req.drop = other;
        req.path = honest_other.path;
        ASSERT_EQ(reason(w.server.verify(req, kNow)), FailReason::NonceDigestMismatch);
        ++tried;
    }
    EXPECT_EQ(tried, 100u);
}

// Drops outside the committed result set cannot be unlocked even with a
// correctly bound digest and a valid proof.
TEST(ProtocolProperty, NonMembersRejected) {
    for (auto mode : {session::Mode::FullCompact, session::Mode::CoreStateful}) {
        World w(mode);
        std::mt19937_64 gen(8);
        std::size_t tried = 0;
        while (tried < 100) {
            auto s = w.search_near(gen() % w.drops.size());
            auto ids = s.response.ids();
            const auto& outsider = w.drops[gen() % w.drops.size()];
            if (std::binary_search(ids.begin(), ids.end(), outsider.id)) continue;
            auto root = s.response.root.value_or(Hash32{});
            auto cd = expected_digest(mode, outsider.id, s.response.pv, s.response.epoch, s.ticket.nonce, root);
            UnlockRequest req;
            req.session_id = s.ticket.id;
            req.drop = outsider.id;
            req.pub = nizk::make_public_inputs(outsider.lat, outsider.lon, 100, cd);
            req.proof = nizk::SimulatedProver(w.keys.proving_key).prove({outsider.lat, outsider.lon}, req.pub);
            if (mode == session::Mode::FullCompact) {
                // Best available forgery: a real member's path.
                req.path = merkle::MerkleTree::build(ids).prove(ids.front());
            }
            auto want = mode == session::Mode::FullCompact ? FailReason::MerkleInvalid : FailReason::NotInResultSet;
            ASSERT_EQ(reason(w.server.verify(req, kNow)), want);
            ++tried;
        }
    }
}

TEST(Protocol, HonestClientRefusesNonMembers) {
    World w;
    auto s = w.search_near(0);
    auto ids = s.response.ids();
    for (const auto& d : w.drops) {
        if (!std::binary_search(ids.begin(), ids.end(), d.id)) {
            EXPECT_THROW(w.client.prove(s.ticket, s.response, d.id, {d.lat, d.lon}), NotInResults);
            break;
        }
    }
}

TEST(Protocol, WitnessOutsideRadiusRefused) {
    World w;
    auto s = w.search_near(0);
    const auto& d = w.drops[0];
    EXPECT_THROW(w.client.prove(s.ticket, s.response, d.id, {d.lat + 0.01, d.lon}), nizk::StatementFalse);
}

TEST(Protocol, TargetMustMatchPublishedDrop) {
    World w;
    auto s = w.search_near(0);
    auto req = w.prove_at(s, w.drops[0].id);
    // Same digest, but a target moved 1 km with a proof the prover can make.
    auto moved = req;
    const auto& d = w.drops[0];
    moved.pub = nizk::make_public_inputs(d.lat + 0.009, d.lon, 100, req.pub.digest());
    moved.proof = nizk::SimulatedProver(w.keys.proving_key).prove({d.lat + 0.009, d.lon}, moved.pub);
    EXPECT_EQ(reason(w.server.verify(moved, kNow)), FailReason::ProofInvalid);
    auto widened = req;
    widened.pub = nizk::make_public_inputs(d.lat, d.lon, 5000, req.pub.digest());
    widened.proof = nizk::SimulatedProver(w.keys.proving_key).prove({d.lat + 0.02, d.lon}, widened.pub);
    EXPECT_EQ(reason(w.server.verify(widened, kNow)), FailReason::ProofInvalid);
    EXPECT_TRUE(w.server.verify(req, kNow).accepted);
}

TEST(Protocol, TamperedCandidateListBreaksDigest) {
    World w;
    auto s = w.search_near(0);
    ASSERT_GE(s.response.candidates.size(), 2u);
    // A server (or network) that hides one candidate from the client makes the
    // client's recomputed root disagree with the bound one.
    auto altered = s.response;
    auto target = w.drops[0].id;
    altered.candidates.erase(std::find_if(altered.candidates.begin(), altered.candidates.end(),
                                          [&](const Candidate& c) { return c.id != target; }));
    const auto& c = w.server.drops().at(target);
    auto req = w.client.prove(s.ticket, altered, target, {c.lat, c.lon});
    EXPECT_EQ(reason(w.server.verify(req, kNow)), FailReason::NonceDigestMismatch);
}

TEST(Protocol, EmptyMatchLeavesSessionUnbound) {
    World w;
    auto t = w.server.init_session(kNow);
    auto resp = w.server.search(t.id, w.client.tokens(-33.8688, 151.2093, 1000), kNow);
    EXPECT_TRUE(resp.candidates.empty());
    EXPECT_FALSE(resp.bound());
    EXPECT_FALSE(w.server.sessions().find(t.id)->bound());
}

TEST(Protocol, RefusingServer) {
    ServerConfig cfg;
    cfg.refuse_sessions = true;
    World w(session::Mode::FullCompact, cfg);
    EXPECT_THROW(w.server.init_session(kNow), SessionRefused);
}

TEST(Protocol, EpochLabels) {
    EXPECT_EQ(epoch_label("ep", 0, 12345), "ep0");
    EXPECT_EQ(epoch_label("ep", 26, 25), "ep0");
    EXPECT_EQ(epoch_label("ep", 26, 26), "ep1");
    ServerConfig cfg;
    cfg.epoch_every = 2;
    World w(session::Mode::FullCompact, cfg);
    EXPECT_EQ(w.search_near(0).response.epoch, "ep0");
    EXPECT_EQ(w.search_near(0).response.epoch, "ep0");
    EXPECT_EQ(w.search_near(0).response.epoch, "ep1");
}

TEST(Audit, HonestRecordPasses) {
    World w;
    auto s = w.search_near(0);
    auto req = w.prove_at(s, w.drops[0].id);
    ASSERT_TRUE(w.server.verify(req, kNow).accepted);
    w.server.sessions().purge_all();
    auto rec = emit_audit_record(*s.response.receipt, req);
    EXPECT_EQ(audit(w.server.public_key(), *w.verifier, rec), Outcome::accept());
    auto parsed = AuditRecord::parse(rec.serialize());
    EXPECT_EQ(parsed, rec);
    EXPECT_TRUE(audit(w.server.public_key(), *w.verifier, parsed).accepted);
}

TEST(Audit, LocalizesFaults) {
    World w;
    auto s1 = w.search_near(0);
    auto s2 = w.search_near(0);
    auto r1 = emit_audit_record(*s1.response.receipt, w.prove_at(s1, w.drops[0].id));
    auto r2 = emit_audit_record(*s2.response.receipt, w.prove_at(s2, w.drops[0].id));
    const auto& key = w.server.public_key();

    auto swapped = r1;
    swapped.receipt = r2.receipt;
    EXPECT_EQ(reason(audit(key, *w.verifier, swapped)), FailReason::NonceDigestMismatch);

    auto resigned = r1;
    resigned.receipt = receipt::sign_receipt(receipt::SigningKey::from_seed(99), r1.receipt.fields);
    EXPECT_EQ(reason(audit(key, *w.verifier, resigned)), FailReason::ReceiptSigInvalid);

    auto edited = r1;
    edited.receipt.fields.epoch = "ep9";
    EXPECT_EQ(reason(audit(key, *w.verifier, edited)), FailReason::ReceiptSigInvalid);

    auto bent = r1;
    ASSERT_GT(bent.path.size(), 0u);
    bent.path.steps[0].sibling[0] ^= 1;
    EXPECT_EQ(reason(audit(key, *w.verifier, bent)), FailReason::MerkleInvalid);

    auto bad_proof = r1;
    bad_proof.proof.body[0] ^= 1;
    EXPECT_EQ(reason(audit(key, *w.verifier, bad_proof)), FailReason::ProofInvalid);
}

TEST(Audit, CoreRecordsCannotShowMembership) {
    World w(session::Mode::CoreStateful);
    auto s = w.search_near(0);
    auto req = w.prove_at(s, w.drops[0].id);
    ASSERT_TRUE(w.server.verify(req, kNow).accepted);
    auto rec = emit_audit_record(*s.response.receipt, req);
    EXPECT_EQ(reason(audit(w.server.public_key(), *w.verifier, rec)), FailReason::MerkleInvalid);
}

TEST(Audit, LogRoundTripAndMalformedInput) {
    World w;
    std::vector<AuditRecord> log;
    for (std::size_t i = 0; i < 5; ++i) {
        auto s = w.search_near(i);
        log.push_back(emit_audit_record(*s.response.receipt, w.prove_at(s, w.drops[i].id)));
    }
    auto bytes = serialize_audit_log(log);
    EXPECT_EQ(parse_audit_log(bytes), log);
    bytes.pop_back();
    EXPECT_THROW(parse_audit_log(bytes), ParseError);
    auto one = log[0].serialize();
    one.resize(one.size() / 2);
    EXPECT_THROW(AuditRecord::parse(one), ParseError);
    EXPECT_THROW(AuditRecord::parse(canon::Message{"a", "b"}.encode()), ParseError);
}

TEST(Protocol, ReasonNamesAreDistinct) {
    std::set<std::string_view> names;
    for (int r = 0; r <= static_cast<int>(FailReason::TokenHashMismatch); ++r) {
        names.insert(reason_name(static_cast<FailReason>(r)));
    }
    EXPECT_EQ(names.size(), static_cast<std::size_t>(FailReason::TokenHashMismatch) + 1);
}
