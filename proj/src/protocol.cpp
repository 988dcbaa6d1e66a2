#include "sbpp/protocol.hpp"

#include <algorithm>

namespace sbpp::protocol {

std::string_view reason_name(FailReason r) {
    switch (r) {
        case FailReason::None: return "none";
        case FailReason::SessionInvalid: return "session-invalid";
        case FailReason::Expired: return "expired";
        case FailReason::Consumed: return "consumed";
        case FailReason::NonceDigestMismatch: return "nonce-digest-mismatch";
        case FailReason::NotInResultSet: return "not-in-result-set";
        case FailReason::MerkleInvalid: return "merkle-invalid";
        case FailReason::ProofInvalid: return "proof-invalid";
        case FailReason::ReceiptSigInvalid: return "receipt-sig-invalid";
        case FailReason::ContextDigestMismatch: return "context-digest-mismatch";
        case FailReason::AuthorizationInvalid: return "authorization-invalid";
        case FailReason::TokenHashMismatch: return "token-hash-mismatch";
    }
    return "?";
}

std::string epoch_label(std::string_view prefix, std::size_t every, std::size_t n) {
    std::size_t e = every == 0 ? 0 : n / every;
    return std::string(prefix) + std::to_string(e);
}

std::vector<std::string> SearchResponse::ids() const {
    std::vector<std::string> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) out.push_back(c.id);
    return out;
}

DropTable make_drop_table(const std::vector<geo::Drop>& drops, double radius_m) {
    DropTable t;
    for (const auto& d : drops) t.emplace(d.id, Candidate{d.id, d.lat, d.lon, radius_m});
    return t;
}

canon::FieldElement expected_digest(session::Mode mode, std::string_view drop,
                                    std::string_view pv, std::string_view epoch,
                                    const Nonce& nonce, const Hash32& root) {
    return mode == session::Mode::CoreStateful ? canon::cd_core(drop, pv, epoch, nonce)
                                               : canon::cd_full(drop, pv, epoch, nonce, root);
}

Server::Server(ServerConfig config, const std::vector<geo::Drop>& drops, ByteView search_key,
               receipt::SigningKey signing_key, std::shared_ptr<const nizk::Verifier> verifier,
               std::shared_ptr<RandomSource> rng)
    : Server(config, geo::GeoIndex::build(drops, search_key, config.precisions),
             make_drop_table(drops, config.unlock_radius_m), std::move(signing_key),
             std::move(verifier), std::move(rng)) {}

Server::Server(ServerConfig config, geo::GeoIndex index, DropTable drops,
               receipt::SigningKey signing_key, std::shared_ptr<const nizk::Verifier> verifier,
               std::shared_ptr<RandomSource> rng)
    : config_(std::move(config)),
      index_(std::move(index)),
      drops_(std::move(drops)),
      signing_key_(std::move(signing_key)),
      verifier_(std::move(verifier)),
      store_(std::move(rng), config_.ttl_seconds) {
    if (!verifier_) throw Error("server needs a proof verifier");
}

session::SessionTicket Server::init_session(Timestamp now) {
    if (config_.refuse_sessions) throw SessionRefused("session refused");
    std::string epoch;
    {
        std::lock_guard lock(epoch_mutex_);
        epoch = epoch_label(config_.epoch_prefix, config_.epoch_every, sessions_opened_++);
    }
    return store_.issue(now, config_.pv, std::move(epoch));
}

SearchResponse Server::search(const std::string& session_id,
                              const std::vector<geo::SearchToken>& tokens, Timestamp now) {
    auto record = store_.validate(session_id, now);
    if (record.bound()) {
        throw session::SessionError(session::SessionErrc::AlreadyBound, "session already searched");
    }
    auto ids = index_.match(tokens);
    if (config_.result_filter) ids = config_.result_filter(std::move(ids));

    SearchResponse resp;
    resp.pv = record.pv;
    resp.epoch = record.epoch;
    resp.mode = config_.mode;
    if (ids.empty()) return resp;

    for (const auto& id : ids) {
        auto it = drops_.find(id);
        if (it == drops_.end()) throw Error("index references unknown drop: " + id);
        resp.candidates.push_back(it->second);
    }
    resp.root = store_.bind_results(session_id, std::move(ids), config_.mode, now);

    receipt::ReceiptFields f;
    f.session_id = record.id;
    f.nonce = record.nonce;
    f.expires_at = record.expires_at;
    f.root = resp.root.value_or(Hash32{});
    f.mode = config_.mode;
    f.pv = record.pv;
    f.epoch = record.epoch;
    resp.receipt = receipt::sign_receipt(signing_key_, std::move(f));
    return resp;
}

VerifyOutcome Server::verify(const UnlockRequest& req, Timestamp now) {
    session::SessionRecord rec;
    try {
        rec = store_.validate(req.session_id, now);
    } catch (const session::SessionError& e) {
        switch (e.code()) {
            case session::SessionErrc::Expired: return Outcome::reject(FailReason::Expired);
            case session::SessionErrc::AlreadyConsumed: return Outcome::reject(FailReason::Consumed);
            default: return Outcome::reject(FailReason::SessionInvalid);
        }
    }
    if (!rec.bound()) return Outcome::reject(FailReason::SessionInvalid);

    auto expected = expected_digest(*rec.mode, req.drop, rec.pv, rec.epoch, rec.nonce,
                                    rec.root.value_or(Hash32{}));
    if (req.pub.digest() != expected) return Outcome::reject(FailReason::NonceDigestMismatch);

    if (*rec.mode == session::Mode::CoreStateful) {
        const auto& set = *rec.result_set;
        if (!std::binary_search(set.begin(), set.end(), req.drop)) {
            return Outcome::reject(FailReason::NotInResultSet);
        }
    } else if (!req.path || !merkle::verify_membership(*rec.root, req.drop, *req.path)) {
        return Outcome::reject(FailReason::MerkleInvalid);
    }

    // The statement must be about this drop's published target.
    auto drop = drops_.find(req.drop);
    if (drop == drops_.end()) return Outcome::reject(FailReason::ProofInvalid);
    auto want = nizk::make_public_inputs(drop->second.lat, drop->second.lon,
                                         drop->second.radius_m, expected);
    if (req.pub != want || !verifier_->verify(req.pub, req.proof)) {
        return Outcome::reject(FailReason::ProofInvalid);
    }

    if (!store_.consume(req.session_id)) return Outcome::reject(FailReason::Consumed);
    return Outcome::accept();
}

std::vector<geo::SearchToken> Client::tokens(double lat, double lon, double radius_m) const {
    return geo::client_tokens(key_, lat, lon, radius_m);
}

UnlockRequest Client::prove(const session::SessionTicket& ticket, const SearchResponse& response,
                            std::string_view drop, const nizk::Witness& witness) const {
    auto it = std::find_if(response.candidates.begin(), response.candidates.end(),
                           [&](const Candidate& c) { return c.id == drop; });
    if (it == response.candidates.end()) {
        throw NotInResults("drop not in returned candidates: " + std::string(drop));
    }
    UnlockRequest req;
    req.session_id = ticket.id;
    req.drop = std::string(drop);
    Hash32 root{};
    if (response.mode == session::Mode::FullCompact) {
        auto ids = response.ids();
        std::sort(ids.begin(), ids.end());
        auto tree = merkle::MerkleTree::build(std::move(ids));
        root = tree.root();
        req.path = tree.prove(drop);
    }
    auto digest = expected_digest(response.mode, drop, response.pv, response.epoch, ticket.nonce, root);
    req.pub = nizk::make_public_inputs(it->lat, it->lon, it->radius_m, digest);
    req.proof = prover_->prove(witness, req.pub);
    return req;
}

Bytes AuditRecord::serialize() const {
    return canon::Message{}
        .add(receipt.serialize())
        .add(drop)
        .add(path.serialize())
        .add(pub.canonical_bytes())
        .add(proof.serialize())
        .encode();
}

AuditRecord AuditRecord::parse(ByteView data) {
    auto f = canon::lp_decode(data);
    if (f.size() != 5) throw ParseError("audit record: expected 5 fields");
    AuditRecord r;
    r.receipt = receipt::Receipt::parse(f[0]);
    r.drop = to_string(f[1]);
    r.path = merkle::MerklePath::parse(f[2]);
    r.pub = nizk::PublicInputs::parse(f[3]);
    r.proof = nizk::Proof::parse(f[4]);
    return r;
}

AuditRecord emit_audit_record(const receipt::Receipt& receipt, const UnlockRequest& request) {
    return {receipt, request.drop, request.path.value_or(merkle::MerklePath{}), request.pub,
            request.proof};
}

AuditOutcome audit(const receipt::PublicKey& server_key, const nizk::Verifier& verifier,
                   const AuditRecord& record) {
    if (!receipt::verify_receipt(server_key, record.receipt)) {
        return Outcome::reject(FailReason::ReceiptSigInvalid);
    }
    const auto& f = record.receipt.fields;
    auto cd = expected_digest(f.mode, record.drop, f.pv, f.epoch, f.nonce, f.root);
    if (record.pub.digest() != cd) return Outcome::reject(FailReason::NonceDigestMismatch);
    // Core receipts carry a zero root, which no path folds to.
    if (!merkle::verify_membership(f.root, record.drop, record.path)) {
        return Outcome::reject(FailReason::MerkleInvalid);
    }
    if (!verifier.verify(record.pub, record.proof)) return Outcome::reject(FailReason::ProofInvalid);
    return Outcome::accept();
}

Bytes serialize_audit_log(const std::vector<AuditRecord>& records) {
    canon::Message m;
    for (const auto& r : records) m.add(r.serialize());
    return m.encode();
}

std::vector<AuditRecord> parse_audit_log(ByteView data) {
    std::vector<AuditRecord> out;
    for (const auto& f : canon::lp_decode(data)) out.push_back(AuditRecord::parse(f));
    return out;
}

}  // namespace sbpp::protocol
