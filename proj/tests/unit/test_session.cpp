#include <gtest/gtest.h>

#include <atomic>
#include <set>
#include <thread>

#include "sbpp/merkle.hpp"
#include "sbpp/session.hpp"

using namespace sbpp;
using namespace sbpp::session;

namespace {

constexpr Timestamp kNow = 1'700'000'000;

SessionStore seeded_store(std::uint64_t seed = 1) {
    return SessionStore(std::make_shared<SeededRandom>(seed));
}

SessionErrc code_of(auto&& fn) {
    try {
        fn();
    } catch (const SessionError& e) {
        return e.code();
    }
    ADD_FAILURE() << "no SessionError thrown";
    return SessionErrc::UnknownSession;
}

}  // namespace

TEST(SessionProperty, NoncesAndIdsAreUnique) {
    SessionStore store;  // system randomness
    std::set<Nonce> nonces;
    std::set<std::string> ids;
    for (int i = 0; i < 100'000; ++i) {
        auto t = store.issue(kNow);
        nonces.insert(t.nonce);
        ids.insert(t.id);
        if (i % 4096 == 4095) store.purge_all();
    }
    EXPECT_EQ(nonces.size(), 100'000u);
    EXPECT_EQ(ids.size(), 100'000u);
}

TEST(Session, TicketShape) {
    auto store = seeded_store();
    auto t = store.issue(kNow, "2", "ep7");
    EXPECT_EQ(t.id.size(), 2 * kSessionIdBytes);
    EXPECT_EQ(t.expires_at, kNow + kDefaultTtlSeconds);
    auto r = store.validate(t.id, kNow);
    EXPECT_EQ(r.nonce, t.nonce);
    EXPECT_EQ(r.pv, "2");
    EXPECT_EQ(r.epoch, "ep7");
    EXPECT_FALSE(r.bound());
}

TEST(Session, SeededIssuanceIsReproducible) {
    auto a = seeded_store(9), b = seeded_store(9), c = seeded_store(10);
    auto ta = a.issue(kNow), tb = b.issue(kNow), tc = c.issue(kNow);
    EXPECT_EQ(ta.id, tb.id);
    EXPECT_EQ(ta.nonce, tb.nonce);
    EXPECT_NE(ta.nonce, tc.nonce);
}

TEST(Session, PredictableIssuerLayout) {
    auto rng = std::make_shared<PredictableRandom>();
    SessionStore store(rng);
    auto t0 = store.issue(kNow);
    auto t1 = store.issue(kNow);
    EXPECT_EQ(rng->position(), 4u);
    auto b0 = PredictableRandom::block(0);
    EXPECT_EQ(t0.id, to_hex(ByteView(b0.data(), kSessionIdBytes)));
    EXPECT_EQ(t0.nonce, PredictableRandom::block(1));
    EXPECT_EQ(t1.nonce, PredictableRandom::block(3));
}

TEST(Session, ExpiryBoundaryIsExclusive) {
    auto store = seeded_store();
    auto t = store.issue(kNow);
    EXPECT_NO_THROW(store.validate(t.id, t.expires_at - 1));
    EXPECT_EQ(code_of([&] { store.validate(t.id, t.expires_at); }), SessionErrc::Expired);
    // Expired records are purged on access.
    EXPECT_EQ(code_of([&] { store.validate(t.id, kNow); }), SessionErrc::UnknownSession);
}

TEST(Session, CustomTtl) {
    SessionStore store(std::make_shared<SeededRandom>(1), 10);
    auto t = store.issue(kNow);
    EXPECT_EQ(t.expires_at, kNow + 10);
    EXPECT_EQ(store.ttl(), 10);
}

TEST(Session, UnknownSession) {
    auto store = seeded_store();
    EXPECT_EQ(code_of([&] { store.validate("nope", kNow); }), SessionErrc::UnknownSession);
    EXPECT_FALSE(store.consume("nope"));
}

TEST(Session, ConsumeIsOneShot) {
    auto store = seeded_store();
    auto t = store.issue(kNow);
    EXPECT_TRUE(store.consume(t.id));
    EXPECT_FALSE(store.consume(t.id));
    EXPECT_EQ(code_of([&] { store.validate(t.id, kNow); }), SessionErrc::AlreadyConsumed);
}

TEST(SessionProperty, ParallelConsumeHasOneWinner) {
    auto store = seeded_store();
    for (int trial = 0; trial < 200; ++trial) {
        auto t = store.issue(kNow);
        std::atomic<int> wins{0};
        std::vector<std::thread> threads;
        for (int k = 0; k < 8; ++k) {
            threads.emplace_back([&] { wins += store.consume(t.id) ? 1 : 0; });
        }
        for (auto& th : threads) th.join();
        ASSERT_EQ(wins.load(), 1);
    }
}

TEST(Session, BindFullKeepsOnlyRoot) {
    auto store = seeded_store();
    auto t = store.issue(kNow);
    std::vector<std::string> ids = {"a", "b", "c"};
    auto root = store.bind_results(t.id, ids, Mode::FullCompact, kNow);
    ASSERT_TRUE(root.has_value());
    EXPECT_EQ(*root, merkle::MerkleTree::build(ids).root());
    auto r = store.validate(t.id, kNow);
    EXPECT_EQ(r.mode, Mode::FullCompact);
    EXPECT_EQ(r.root, root);
    EXPECT_FALSE(r.result_set.has_value());
    EXPECT_EQ(code_of([&] { store.bind_results(t.id, ids, Mode::FullCompact, kNow); }),
              SessionErrc::AlreadyBound);
}

TEST(Session, BindCoreKeepsIds) {
    auto store = seeded_store();
    auto t = store.issue(kNow);
    EXPECT_FALSE(store.bind_results(t.id, {"a", "b"}, Mode::CoreStateful, kNow).has_value());
    auto r = store.validate(t.id, kNow);
    EXPECT_EQ(r.result_set, (std::vector<std::string>{"a", "b"}));
    EXPECT_FALSE(r.root.has_value());
}

TEST(Session, BindRejectsBadInput) {
    auto store = seeded_store();
    auto t = store.issue(kNow);
    EXPECT_EQ(code_of([&] { store.bind_results(t.id, {}, Mode::FullCompact, kNow); }),
              SessionErrc::EmptyResultSet);
    EXPECT_THROW(store.bind_results(t.id, {"b", "a"}, Mode::CoreStateful, kNow), merkle::MerkleError);
    EXPECT_EQ(code_of([&] { store.bind_results(t.id, {"a"}, Mode::FullCompact, t.expires_at); }),
              SessionErrc::Expired);
    EXPECT_EQ(code_of([&] { store.bind_results("nope", {"a"}, Mode::FullCompact, kNow); }),
              SessionErrc::UnknownSession);
}

TEST(Session, LifecycleAccounting) {
    auto store = seeded_store();
    std::vector<SessionTicket> ts;
    for (int i = 0; i < 9; ++i) ts.push_back(store.issue(kNow + i));
    for (int i = 0; i < 3; ++i) store.consume(ts[i].id);
    // Sessions 3..5 are past expiry at this clock; 6..8 still live.
    Timestamp later = kNow + kDefaultTtlSeconds + 5;
    auto s = store.stats(later);
    EXPECT_EQ(s.issued, 9u);
    EXPECT_EQ(s.consumed, 3u);
    EXPECT_EQ(s.expired, 3u);
    EXPECT_EQ(s.pending, 3u);
    EXPECT_EQ(s.issued, s.consumed + s.expired + s.pending + s.discarded);
    store.purge_expired(later);
    s = store.stats(later);
    EXPECT_EQ(s.expired, 3u);
    EXPECT_EQ(s.pending, 3u);
    store.purge_all();
    s = store.stats(later);
    EXPECT_EQ(s.discarded, 3u);
    EXPECT_EQ(s.issued, s.consumed + s.expired + s.pending + s.discarded);
    EXPECT_EQ(store.size(), 0u);
}

TEST(Session, CompactStateIsConstant) {
    std::size_t compact = 0, prev_stateful = 0;
    for (std::size_t n : {1u, 10u, 100u, 1000u}) {
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < n; ++i) ids.push_back("drop-" + std::to_string(100000 + i));
        SessionRecord r;
        r.id = std::string(32, '0');
        r.mode = Mode::FullCompact;
        r.root = merkle::MerkleTree::build(ids).root();
        auto c = verifier_state(r).size();
        if (compact == 0) compact = c;
        EXPECT_EQ(c, compact);
        r.mode = Mode::CoreStateful;
        r.root.reset();
        r.result_set = ids;
        auto s = verifier_state(r).size();
        EXPECT_GT(s, prev_stateful);
        prev_stateful = s;
    }
}

TEST(Session, ModeNames) {
    EXPECT_EQ(mode_name(Mode::CoreStateful), "core");
    EXPECT_EQ(parse_mode("full"), Mode::FullCompact);
    EXPECT_THROW(parse_mode("half"), ParseError);
}
