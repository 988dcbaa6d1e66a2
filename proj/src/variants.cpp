#include "sbpp/variants.hpp"

#include <algorithm>

namespace sbpp::variants {

using protocol::FailReason;
using protocol::Outcome;

namespace {

constexpr std::string_view kCapabilityDomain = "SBPP-V5-CAP";
constexpr std::string_view kPermitDomain = "SBPP-V6-PERMIT";
constexpr std::string_view kMacDomain = "SBPP-V7-MAC";
constexpr std::string_view kMacKeyDomain = "SBPP-V7-KEY";
constexpr std::string_view kTokenDomain = "SBPP-V8-TOKEN";

Bytes u64_be(std::uint64_t v) {
    Bytes b(8);
    for (int i = 7; i >= 0; --i, v >>= 8) b[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
    return b;
}

std::vector<std::string> sorted_ids(const Discovery& d) {
    std::vector<std::string> ids;
    for (const auto& c : d.candidates) ids.push_back(c.id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

/// Grant issued for `drop`, or any other one the client holds.
Bytes grant_for(const Discovery& d, std::string_view drop) {
    if (auto it = d.drop_grants.find(drop); it != d.drop_grants.end()) return it->second;
    if (!d.drop_grants.empty()) return d.drop_grants.begin()->second;
    return {};
}

Outcome session_reject(const session::SessionError& e) {
    switch (e.code()) {
        case session::SessionErrc::Expired: return Outcome::reject(FailReason::Expired);
        case session::SessionErrc::AlreadyConsumed: return Outcome::reject(FailReason::Consumed);
        default: return Outcome::reject(FailReason::SessionInvalid);
    }
}

Bytes token_query(const std::vector<geo::SearchToken>& tokens) {
    Bytes q;
    for (const auto& t : tokens) q.insert(q.end(), t.tag.begin(), t.tag.end());
    return q;
}

}  // namespace

std::string_view kind_name(Kind k) {
    switch (k) {
        case Kind::V1: return "V1";
        case Kind::V2: return "V2";
        case Kind::V3: return "V3";
        case Kind::V4a: return "V4a";
        case Kind::V4b: return "V4b";
        case Kind::V5: return "V5";
        case Kind::V6: return "V6";
        case Kind::V7: return "V7";
        case Kind::V8: return "V8";
    }
    return "?";
}

Kind parse_kind(std::string_view name) {
    for (Kind k : all_kinds()) {
        if (kind_name(k) == name) return k;
    }
    throw Error("unknown variant: " + std::string(name));
}

const std::vector<Kind>& all_kinds() {
    static const std::vector<Kind> kinds = {Kind::V1,  Kind::V2, Kind::V3, Kind::V4a, Kind::V4b,
                                            Kind::V5, Kind::V6, Kind::V7, Kind::V8};
    return kinds;
}

bool Discovery::contains(std::string_view drop) const {
    return std::any_of(candidates.begin(), candidates.end(),
                       [&](const protocol::Candidate& c) { return c.id == drop; });
}

Variant::Variant(Kind kind, const VariantConfig& config)
    : kind_(kind),
      config_(config),
      drops_(protocol::make_drop_table(config.drops, config.unlock_radius_m)),
      prover_(config.prover),
      verifier_(config.verifier) {
    auto keys = nizk::setup(config.seed);
    if (!prover_) prover_ = std::make_shared<nizk::SimulatedProver>(keys.proving_key);
    if (!verifier_) verifier_ = std::make_shared<nizk::SimulatedVerifier>(keys.verifying_key);
    if (!config_.rng) config_.rng = std::make_shared<SeededRandom>(config.seed, "variant-sessions");
}

std::string Variant::next_epoch() {
    std::lock_guard lock(epoch_mutex_);
    return protocol::epoch_label(config_.epoch_prefix, config_.epoch_every, opened_++);
}

session::SessionTicket Variant::open_session(Timestamp now) {
    return store().issue(now, config_.pv, next_epoch());
}

Request Variant::prove(const session::SessionTicket& ticket, const Discovery& discovery,
                       std::string_view drop, const nizk::Witness& witness) const {
    if (!discovery.contains(drop)) {
        throw protocol::NotInResults("drop not in returned candidates: " + std::string(drop));
    }
    return build_request(ticket, discovery, drop, witness);
}

Request Variant::build_request(const session::SessionTicket& ticket, const Discovery& discovery,
                               std::string_view drop, const nizk::Witness& witness) const {
    Request req;
    req.session_id = ticket.id;
    req.drop = std::string(drop);
    req.pub = public_inputs(ticket, discovery, drop);
    if (uses_proof()) req.proof = prover_->prove(witness, req.pub);
    req.path = path_for(discovery, drop);
    req.sidecar = sidecar_for(ticket, discovery, drop);
    return req;
}

EvidenceRecord Variant::record(const Discovery& discovery, const Request& request) const {
    EvidenceRecord r;
    r.kind = kind_;
    r.session_id = request.session_id;
    r.drop = request.drop;
    r.pv = discovery.pv;
    r.epoch = discovery.epoch;
    r.evidence = request.sidecar;
    r.path = request.path.value_or(merkle::MerklePath{});
    r.pub = request.pub;
    r.proof = request.proof;
    return r;
}

void Variant::rebind(Request& request, const session::SessionTicket& attacker) const {
    request.session_id = attacker.id;
}

Bytes Variant::sidecar_for(const session::SessionTicket&, const Discovery&, std::string_view) const {
    return {};
}

std::optional<merkle::MerklePath> Variant::path_for(const Discovery&, std::string_view) const {
    return std::nullopt;
}

nizk::PublicInputs Variant::target_inputs(std::string_view drop,
                                          const canon::FieldElement& digest) const {
    auto it = drops_.find(drop);
    if (it == drops_.end()) throw Error("unknown drop: " + std::string(drop));
    return nizk::make_public_inputs(it->second.lat, it->second.lon, it->second.radius_m, digest);
}

bool Variant::statement_holds(std::string_view drop, const nizk::PublicInputs& pub,
                              const std::optional<nizk::Proof>& proof) const {
    if (!drops_.contains(drop) || !proof) return false;
    if (pub != target_inputs(drop, pub.digest())) return false;
    return verifier_->verify(pub, *proof);
}

namespace {

/// Shared plumbing for the baselines: a local session store, the encrypted
/// (or plaintext) index, and context-digest statements.
class Baseline : public Variant {
public:
    Baseline(Kind kind, const VariantConfig& config)
        : Variant(kind, config),
          store_(config_.rng, config.ttl_seconds),
          signing_(receipt::SigningKey::from_seed(config.seed)),
          mac_key_(canon::sha256(canon::Message{}.add(kMacKeyDomain).add(u64_be(config.seed)).encode())) {
        if (kind == Kind::V1) {
            plain_ = geo::PlainIndex::build(config.drops, config.precisions);
        } else {
            index_ = geo::GeoIndex::build(config.drops, config.search_key, config.precisions);
        }
    }

    session::SessionStore& store() override { return store_; }

    Discovery discover(const session::SessionTicket& ticket, double lat, double lon,
                       double radius_m, Timestamp now) override {
        Discovery d;
        d.session_id = ticket.id;
        std::vector<std::string> ids;
        if (kind_ == Kind::V1) {
            auto cells = geo::client_cells(lat, lon, radius_m);
            for (const auto& c : cells) d.query.insert(d.query.end(), c.begin(), c.end());
            ids = plain_.match(cells);
        } else {
            auto tokens = geo::client_tokens(config_.search_key, lat, lon, radius_m);
            d.query = token_query(tokens);
            ids = index_.match(tokens);
        }
        auto rec = session_aware() ? store_.validate(ticket.id, now) : context_of(ticket.id);
        d.pv = rec.pv;
        d.epoch = rec.epoch;
        for (const auto& id : ids) d.candidates.push_back(drops_.at(id));
        if (!ids.empty()) issue_grants(rec, ids, d, now);
        return d;
    }

    nizk::PublicInputs public_inputs(const session::SessionTicket&, const Discovery& discovery,
                                     std::string_view drop) const override {
        return target_inputs(drop, canon::context_digest(drop, discovery.pv, discovery.epoch));
    }

protected:
    virtual bool session_aware() const { return true; }
    virtual void issue_grants(const session::SessionRecord&, const std::vector<std::string>&,
                              Discovery&, Timestamp) {}

    /// pv/epoch of a session without enforcing its lifecycle.
    session::SessionRecord context_of(const std::string& id) const {
        if (auto rec = store_.find(id)) return *rec;
        session::SessionRecord r;
        r.pv = config_.pv;
        r.epoch = config_.epoch_prefix + "0";
        return r;
    }

    /// Context digest and proof, the check every proof-carrying baseline shares.
    Outcome check_statement(const Request& req, std::string_view pv, std::string_view epoch) const {
        if (req.pub.digest() != canon::context_digest(req.drop, pv, epoch)) {
            return Outcome::reject(FailReason::ContextDigestMismatch);
        }
        if (!statement_holds(req.drop, req.pub, req.proof)) {
            return Outcome::reject(FailReason::ProofInvalid);
        }
        return Outcome::accept();
    }

    Outcome audit_statement(const EvidenceRecord& r) const {
        if (r.pub.digest() != canon::context_digest(r.drop, r.pv, r.epoch)) {
            return Outcome::reject(FailReason::ContextDigestMismatch);
        }
        if (uses_proof() && (!r.proof || !verifier_->verify(r.pub, *r.proof))) {
            return Outcome::reject(FailReason::ProofInvalid);
        }
        return Outcome::accept();
    }

    Outcome consume(const std::string& id) {
        return store_.consume(id) ? Outcome::accept() : Outcome::reject(FailReason::Consumed);
    }

    session::SessionStore store_;
    receipt::SigningKey signing_;
    Hash32 mac_key_;
    geo::GeoIndex index_;
    geo::PlainIndex plain_;
};

// V1, V2: no session checks at unlock.
class Sessionless final : public Baseline {
public:
    using Baseline::Baseline;

    protocol::VerifyOutcome verify(const Request& req, Timestamp) override {
        auto ctx = context_of(req.session_id);
        return check_statement(req, ctx.pv, ctx.epoch);
    }

    protocol::AuditOutcome audit(const EvidenceRecord& r) const override { return audit_statement(r); }

protected:
    bool session_aware() const override { return false; }
};

// V3: the session nonce travels beside the proof, not inside it.
class AppNonce final : public Baseline {
public:
    using Baseline::Baseline;

    protocol::VerifyOutcome verify(const Request& req, Timestamp now) override {
        session::SessionRecord rec;
        try {
            rec = store_.validate(req.session_id, now);
        } catch (const session::SessionError& e) {
            return session_reject(e);
        }
        if (req.sidecar.size() != rec.nonce.size() ||
            !std::equal(rec.nonce.begin(), rec.nonce.end(), req.sidecar.begin())) {
            return Outcome::reject(FailReason::AuthorizationInvalid);
        }
        if (auto o = check_statement(req, rec.pv, rec.epoch); !o.accepted) return o;
        return consume(req.session_id);
    }

    protocol::AuditOutcome audit(const EvidenceRecord& r) const override { return audit_statement(r); }

    void rebind(Request& req, const session::SessionTicket& attacker) const override {
        req.session_id = attacker.id;
        req.sidecar = to_bytes(attacker.nonce);
    }

protected:
    Bytes sidecar_for(const session::SessionTicket& t, const Discovery&, std::string_view) const override {
        return to_bytes(t.nonce);
    }
};

// V5: signed capability over (S, D).
class Capability final : public Baseline {
public:
    using Baseline::Baseline;

    protocol::VerifyOutcome verify(const Request& req, Timestamp now) override {
        session::SessionRecord rec;
        try {
            rec = store_.validate(req.session_id, now);
        } catch (const session::SessionError& e) {
            return session_reject(e);
        }
        if (!signing_.public_key().verify(body(req.session_id, req.drop), req.sidecar)) {
            return Outcome::reject(FailReason::AuthorizationInvalid);
        }
        if (auto o = check_statement(req, rec.pv, rec.epoch); !o.accepted) return o;
        return consume(req.session_id);
    }

    protocol::AuditOutcome audit(const EvidenceRecord& r) const override {
        if (!signing_.public_key().verify(body(r.session_id, r.drop), r.evidence)) {
            return Outcome::reject(FailReason::AuthorizationInvalid);
        }
        return audit_statement(r);
    }

protected:
    void issue_grants(const session::SessionRecord& rec, const std::vector<std::string>& ids,
                      Discovery& d, Timestamp) override {
        for (const auto& id : ids) d.drop_grants[id] = signing_.sign(body(rec.id, id));
    }
    Bytes sidecar_for(const session::SessionTicket&, const Discovery& d, std::string_view drop) const override {
        return grant_for(d, drop);
    }

private:
    static Bytes body(std::string_view session, std::string_view drop) {
        return canon::Message{kCapabilityDomain, session, drop}.encode();
    }
};

// V6: signed permit over (S, D, pv, e); the proximity proof is skipped.
class Permit final : public Baseline {
public:
    using Baseline::Baseline;

    bool uses_proof() const override { return false; }

    protocol::VerifyOutcome verify(const Request& req, Timestamp now) override {
        session::SessionRecord rec;
        try {
            rec = store_.validate(req.session_id, now);
        } catch (const session::SessionError& e) {
            return session_reject(e);
        }
        if (!signing_.public_key().verify(body(req.session_id, req.drop, rec.pv, rec.epoch), req.sidecar)) {
            return Outcome::reject(FailReason::AuthorizationInvalid);
        }
        return consume(req.session_id);
    }

    protocol::AuditOutcome audit(const EvidenceRecord& r) const override {
        if (!signing_.public_key().verify(body(r.session_id, r.drop, r.pv, r.epoch), r.evidence)) {
            return Outcome::reject(FailReason::AuthorizationInvalid);
        }
        return audit_statement(r);
    }

protected:
    void issue_grants(const session::SessionRecord& rec, const std::vector<std::string>& ids,
                      Discovery& d, Timestamp) override {
        for (const auto& id : ids) d.drop_grants[id] = signing_.sign(body(rec.id, id, rec.pv, rec.epoch));
    }
    Bytes sidecar_for(const session::SessionTicket&, const Discovery& d, std::string_view drop) const override {
        return grant_for(d, drop);
    }

private:
    static Bytes body(std::string_view s, std::string_view drop, std::string_view pv, std::string_view e) {
        return canon::Message{kPermitDomain, s, drop, pv, e}.encode();
    }
};

// V7: server MAC over the session's result set; sidecar = LP(tag, ids...).
class ResultMac final : public Baseline {
public:
    using Baseline::Baseline;

    protocol::VerifyOutcome verify(const Request& req, Timestamp now) override {
        session::SessionRecord rec;
        try {
            rec = store_.validate(req.session_id, now);
        } catch (const session::SessionError& e) {
            return session_reject(e);
        }
        if (auto o = check_mac(req.session_id, req.drop, req.sidecar); !o.accepted) return o;
        if (auto o = check_statement(req, rec.pv, rec.epoch); !o.accepted) return o;
        return consume(req.session_id);
    }

    protocol::AuditOutcome audit(const EvidenceRecord& r) const override {
        if (!check_mac(r.session_id, r.drop, r.evidence).accepted) {
            return Outcome::reject(FailReason::AuthorizationInvalid);
        }
        return audit_statement(r);
    }

protected:
    void issue_grants(const session::SessionRecord& rec, const std::vector<std::string>& ids,
                      Discovery& d, Timestamp) override {
        auto tag = tag_for(rec.id, ids);
        d.session_evidence = to_bytes(tag);
    }
    Bytes sidecar_for(const session::SessionTicket&, const Discovery& d, std::string_view) const override {
        canon::Message m;
        m.add(d.session_evidence);
        for (const auto& id : sorted_ids(d)) m.add(id);
        return m.encode();
    }

private:
    Hash32 tag_for(std::string_view session, const std::vector<std::string>& ids) const {
        canon::Message m{kMacDomain, session};
        for (const auto& id : ids) m.add(id);
        return canon::hmac_sha256(mac_key_, m.encode());
    }

    Outcome check_mac(std::string_view session, std::string_view drop, ByteView sidecar) const {
        std::vector<Bytes> fields;
        try {
            fields = canon::lp_decode(sidecar);
        } catch (const ParseError&) {
            return Outcome::reject(FailReason::AuthorizationInvalid);
        }
        if (fields.empty()) return Outcome::reject(FailReason::AuthorizationInvalid);
        std::vector<std::string> ids;
        for (std::size_t i = 1; i < fields.size(); ++i) ids.push_back(to_string(fields[i]));
        auto tag = tag_for(session, ids);
        if (fields[0].size() != tag.size() || !std::equal(tag.begin(), tag.end(), fields[0].begin())) {
            return Outcome::reject(FailReason::AuthorizationInvalid);
        }
        if (std::find(ids.begin(), ids.end(), drop) == ids.end()) {
            return Outcome::reject(FailReason::NotInResultSet);
        }
        return Outcome::accept();
    }
};

// V8: pub[7] = digest(token), token = LP(content, Sign(content)).
class TokenHash final : public Baseline {
public:
    TokenHash(const VariantConfig& config) : Baseline(Kind::V8, config), content_(config.v8_token) {}

    nizk::PublicInputs public_inputs(const session::SessionTicket&, const Discovery& d,
                                     std::string_view drop) const override {
        return target_inputs(drop, token_digest(grant_for(d, drop)));
    }

    protocol::VerifyOutcome verify(const Request& req, Timestamp now) override {
        session::SessionRecord rec;
        try {
            rec = store_.validate(req.session_id, now);
        } catch (const session::SessionError& e) {
            return session_reject(e);
        }
        if (!rec.bound()) return Outcome::reject(FailReason::SessionInvalid);
        if (req.pub.digest() != token_digest(req.sidecar)) {
            return Outcome::reject(FailReason::TokenHashMismatch);
        }
        auto content = open_token(req.sidecar);
        if (!content) return Outcome::reject(FailReason::AuthorizationInvalid);
        if (*content != make_content(rec.id, rec.nonce, *rec.root, req.drop, rec.pv, rec.epoch)) {
            return Outcome::reject(FailReason::AuthorizationInvalid);
        }
        if (!statement_holds(req.drop, req.pub, req.proof)) return Outcome::reject(FailReason::ProofInvalid);
        return consume(req.session_id);
    }

    protocol::AuditOutcome audit(const EvidenceRecord& r) const override {
        if (r.pub.digest() != token_digest(r.evidence)) {
            return Outcome::reject(FailReason::TokenHashMismatch);
        }
        auto content = open_token(r.evidence);
        if (!content) return Outcome::reject(FailReason::TokenHashMismatch);
        // Session-bound fields are checked against the record's own claims.
        auto fields = canon::lp_decode(*content);
        bool ok = false;
        if (content_ == TokenContent::DropOnly) {
            ok = fields.size() == 4 && to_string(fields[1]) == r.drop && to_string(fields[2]) == r.pv &&
                 to_string(fields[3]) == r.epoch;
        } else {
            ok = fields.size() == 7 && to_string(fields[1]) == r.session_id &&
                 to_string(fields[4]) == r.drop && to_string(fields[5]) == r.pv &&
                 to_string(fields[6]) == r.epoch;
        }
        if (!ok) return Outcome::reject(FailReason::TokenHashMismatch);
        if (!r.proof || !verifier_->verify(r.pub, *r.proof)) return Outcome::reject(FailReason::ProofInvalid);
        return Outcome::accept();
    }

protected:
    void issue_grants(const session::SessionRecord& rec, const std::vector<std::string>& ids,
                      Discovery& d, Timestamp now) override {
        auto root = store_.bind_results(rec.id, ids, session::Mode::FullCompact, now);
        d.root = root;
        for (const auto& id : ids) {
            auto content = make_content(rec.id, rec.nonce, *root, id, rec.pv, rec.epoch);
            auto sig = signing_.sign(content);
            d.drop_grants[id] = canon::Message{}.add(content).add(sig).encode();
        }
    }
    Bytes sidecar_for(const session::SessionTicket&, const Discovery& d, std::string_view drop) const override {
        return grant_for(d, drop);
    }

private:
    static canon::FieldElement token_digest(const Bytes& token) {
        std::vector<Bytes> fields{token};
        return canon::digest(fields);
    }

    Bytes make_content(std::string_view s, const Nonce& n, const Hash32& root, std::string_view drop,
                       std::string_view pv, std::string_view e) const {
        if (content_ == TokenContent::DropOnly) return canon::Message{kTokenDomain, drop, pv, e}.encode();
        return canon::Message{}.add(kTokenDomain).add(s).add(n).add(root).add(drop).add(pv).add(e).encode();
    }

    /// Content bytes of a well-formed token with a valid signature.
    std::optional<Bytes> open_token(ByteView token) const {
        std::vector<Bytes> f;
        try {
            f = canon::lp_decode(token);
            if (f.size() != 2) return std::nullopt;
            canon::lp_decode(f[0]);
        } catch (const ParseError&) {
            return std::nullopt;
        }
        if (!signing_.public_key().verify(f[0], f[1])) return std::nullopt;
        return f[0];
    }

    TokenContent content_;
};

// V4a, V4b: the protocol server and client themselves.
class Bound final : public Variant {
public:
    Bound(Kind kind, const VariantConfig& config)
        : Variant(kind, config),
          mode_(kind == Kind::V4a ? session::Mode::CoreStateful : session::Mode::FullCompact),
          server_(server_config(config, mode_), config.drops, config.search_key,
                  receipt::SigningKey::from_seed(config.seed), verifier_, config_.rng),
          client_(config.search_key, prover_) {}

    session::SessionStore& store() override { return server_.sessions(); }

    session::SessionTicket open_session(Timestamp now) override { return server_.init_session(now); }

    Discovery discover(const session::SessionTicket& ticket, double lat, double lon,
                       double radius_m, Timestamp now) override {
        auto tokens = client_.tokens(lat, lon, radius_m);
        auto resp = server_.search(ticket.id, tokens, now);
        Discovery d;
        d.session_id = ticket.id;
        d.query = token_query(tokens);
        d.candidates = resp.candidates;
        d.pv = resp.pv;
        d.epoch = resp.epoch;
        d.root = resp.root;
        if (resp.receipt) d.session_evidence = resp.receipt->serialize();
        return d;
    }

    nizk::PublicInputs public_inputs(const session::SessionTicket& ticket, const Discovery& d,
                                     std::string_view drop) const override {
        Hash32 root{};
        auto ids = sorted_ids(d);
        if (mode_ == session::Mode::FullCompact && !ids.empty()) {
            root = merkle::MerkleTree::build(ids).root();
        }
        return target_inputs(drop, protocol::expected_digest(mode_, drop, d.pv, d.epoch, ticket.nonce, root));
    }

    protocol::VerifyOutcome verify(const Request& req, Timestamp now) override {
        if (!req.proof) return Outcome::reject(FailReason::ProofInvalid);
        return server_.verify({req.session_id, req.drop, req.pub, *req.proof, req.path}, now);
    }

    EvidenceRecord record(const Discovery& d, const Request& req) const override {
        auto r = Variant::record(d, req);
        r.evidence = d.session_evidence;
        return r;
    }

    protocol::AuditOutcome audit(const EvidenceRecord& r) const override {
        protocol::AuditRecord a;
        try {
            a.receipt = receipt::Receipt::parse(r.evidence);
        } catch (const ParseError&) {
            return Outcome::reject(FailReason::ReceiptSigInvalid);
        }
        if (!r.proof) return Outcome::reject(FailReason::ProofInvalid);
        a.drop = r.drop;
        a.path = r.path;
        a.pub = r.pub;
        a.proof = *r.proof;
        return protocol::audit(server_.public_key(), *verifier_, a);
    }

    const receipt::PublicKey& public_key() const { return server_.public_key(); }

protected:
    std::optional<merkle::MerklePath> path_for(const Discovery& d, std::string_view drop) const override {
        if (mode_ != session::Mode::FullCompact) return std::nullopt;
        auto ids = sorted_ids(d);
        if (ids.empty()) return merkle::MerklePath{};
        auto tree = merkle::MerkleTree::build(ids);
        // A drop outside the set gets the best path the client has: its first member's.
        if (!std::binary_search(ids.begin(), ids.end(), drop)) return tree.prove(ids.front());
        return tree.prove(drop);
    }

private:
    static protocol::ServerConfig server_config(const VariantConfig& c, session::Mode mode) {
        protocol::ServerConfig s;
        s.mode = mode;
        s.pv = c.pv;
        s.epoch_prefix = c.epoch_prefix;
        s.epoch_every = c.epoch_every;
        s.ttl_seconds = c.ttl_seconds;
        s.unlock_radius_m = c.unlock_radius_m;
        s.precisions = c.precisions;
        return s;
    }

    session::Mode mode_;
    protocol::Server server_;
    protocol::Client client_;
};

}  // namespace

std::unique_ptr<Variant> make_variant(Kind kind, VariantConfig config) {
    switch (kind) {
        case Kind::V1:
        case Kind::V2: return std::make_unique<Sessionless>(kind, config);
        case Kind::V3: return std::make_unique<AppNonce>(kind, config);
        case Kind::V4a:
        case Kind::V4b: return std::make_unique<Bound>(kind, config);
        case Kind::V5: return std::make_unique<Capability>(kind, config);
        case Kind::V6: return std::make_unique<Permit>(kind, config);
        case Kind::V7: return std::make_unique<ResultMac>(kind, config);
        case Kind::V8: return std::make_unique<TokenHash>(config);
    }
    throw Error("unknown variant kind");
}

}  // namespace sbpp::variants
