#pragma once

// Search-bound proximity proof flow: session issue, encrypted search with a
// committed result set, proof generation bound to the session nonce (and the
// Merkle root in full mode), online verification and offline audit.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sbpp/canon.hpp"
#include "sbpp/geoindex.hpp"
#include "sbpp/merkle.hpp"
#include "sbpp/nizk.hpp"
#include "sbpp/random.hpp"
#include "sbpp/receipt.hpp"
#include "sbpp/session.hpp"

namespace sbpp::protocol {

enum class FailReason {
    None,
    SessionInvalid,
    Expired,
    Consumed,
    NonceDigestMismatch,
    NotInResultSet,
    MerkleInvalid,
    ProofInvalid,
    ReceiptSigInvalid,
    // Baseline variants only.
    ContextDigestMismatch,
    AuthorizationInvalid,
    TokenHashMismatch,
};

std::string_view reason_name(FailReason r);

struct Outcome {
    bool accepted = false;
    FailReason reason = FailReason::None;

    static Outcome accept() { return {true, FailReason::None}; }
    static Outcome reject(FailReason r) { return {false, r}; }
    bool operator==(const Outcome&) const = default;
};

using VerifyOutcome = Outcome;
using AuditOutcome = Outcome;

/// Step-5 metadata the client needs to build its statement.
struct Candidate {
    std::string id;
    double lat = 0;
    double lon = 0;
    double radius_m = 0;
};

/// Epoch label for the n-th issued session: "<prefix><n / every>".
/// every == 0 means a single epoch.
std::string epoch_label(std::string_view prefix, std::size_t every, std::size_t n);

struct ServerConfig {
    session::Mode mode = session::Mode::FullCompact;
    std::string pv = "1";
    std::string epoch_prefix = "ep";
    std::size_t epoch_every = 0;
    Timestamp ttl_seconds = session::kDefaultTtlSeconds;
    double unlock_radius_m = 100.0;
    std::vector<int> precisions = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    /// Dishonest-server hook: rewrites the matched ids before binding.
    std::function<std::vector<std::string>(std::vector<std::string>)> result_filter;
    /// Dishonest-server hook: refuse to open sessions.
    bool refuse_sessions = false;
};

struct SearchResponse {
    std::vector<Candidate> candidates;
    std::optional<Hash32> root;
    std::optional<receipt::Receipt> receipt;
    std::string pv;
    std::string epoch;
    session::Mode mode = session::Mode::FullCompact;

    bool bound() const { return receipt.has_value(); }
    std::vector<std::string> ids() const;
};

struct UnlockRequest {
    std::string session_id;
    std::string drop;
    nizk::PublicInputs pub;
    nizk::Proof proof;
    std::optional<merkle::MerklePath> path;
};

class SessionRefused : public Error {
public:
    using Error::Error;
};

/// Drop metadata keyed by id.
using DropTable = std::map<std::string, Candidate, std::less<>>;
DropTable make_drop_table(const std::vector<geo::Drop>& drops, double radius_m);

class Server {
public:
    Server(ServerConfig config, const std::vector<geo::Drop>& drops, ByteView search_key,
           receipt::SigningKey signing_key, std::shared_ptr<const nizk::Verifier> verifier,
           std::shared_ptr<RandomSource> rng = make_system_random());

    Server(ServerConfig config, geo::GeoIndex index, DropTable drops,
           receipt::SigningKey signing_key, std::shared_ptr<const nizk::Verifier> verifier,
           std::shared_ptr<RandomSource> rng = make_system_random());

    /// Steps 1-2. Throws SessionRefused when configured to refuse.
    session::SessionTicket init_session(Timestamp now);

    /// Steps 5-6. An empty match returns no candidates and leaves the
    /// session unbound. Throws SessionError for invalid sessions.
    SearchResponse search(const std::string& session_id,
                          const std::vector<geo::SearchToken>& tokens, Timestamp now);

    /// Step 10: session, digest, membership, proof, then atomic consume.
    VerifyOutcome verify(const UnlockRequest& request, Timestamp now);

    session::SessionStore& sessions() { return store_; }
    const receipt::PublicKey& public_key() const { return signing_key_.public_key(); }
    const ServerConfig& config() const { return config_; }
    const DropTable& drops() const { return drops_; }

private:
    ServerConfig config_;
    geo::GeoIndex index_;
    DropTable drops_;
    receipt::SigningKey signing_key_;
    std::shared_ptr<const nizk::Verifier> verifier_;
    session::SessionStore store_;
    std::mutex epoch_mutex_;
    std::size_t sessions_opened_ = 0;
};

class NotInResults : public Error {
public:
    using Error::Error;
};

class Client {
public:
    Client(const Hash32& search_key, std::shared_ptr<const nizk::Prover> prover)
        : key_(search_key), prover_(std::move(prover)) {}

    std::vector<geo::SearchToken> tokens(double lat, double lon, double radius_m) const;

    /// Steps 7-9. Recomputes the Merkle root from the returned ids, derives
    /// the challenge digest and proves. Throws NotInResults or StatementFalse.
    UnlockRequest prove(const session::SessionTicket& ticket, const SearchResponse& response,
                        std::string_view drop, const nizk::Witness& witness) const;

    const Hash32& search_key() const { return key_; }

private:
    Hash32 key_;
    std::shared_ptr<const nizk::Prover> prover_;
};

/// Expected pub[7] for a drop under a session context.
canon::FieldElement expected_digest(session::Mode mode, std::string_view drop,
                                    std::string_view pv, std::string_view epoch,
                                    const Nonce& nonce, const Hash32& root);

struct AuditRecord {
    receipt::Receipt receipt;
    std::string drop;
    merkle::MerklePath path;
    nizk::PublicInputs pub;
    nizk::Proof proof;

    /// LP(receipt_bytes, D, path_bytes, pub (8x32 B), proof_bytes)
    Bytes serialize() const;
    static AuditRecord parse(ByteView data);
    bool operator==(const AuditRecord&) const = default;
};

AuditRecord emit_audit_record(const receipt::Receipt& receipt, const UnlockRequest& request);

/// Offline audit with no session state: receipt signature, digest
/// recomputation from receipt fields, Merkle membership, proof.
AuditOutcome audit(const receipt::PublicKey& server_key, const nizk::Verifier& verifier,
                   const AuditRecord& record);

/// Length-framed stream of records: LP(record_1, record_2, ...).
Bytes serialize_audit_log(const std::vector<AuditRecord>& records);
std::vector<AuditRecord> parse_audit_log(ByteView data);

}  // namespace sbpp::protocol
