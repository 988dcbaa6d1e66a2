#pragma once

// Protocol variants compared by the adversary harness. Every variant runs the
// same search -> prove -> verify -> audit flow and differs only in how (or
// whether) the proof is bound to the session that authorized it:
//
//   V1  plaintext geohash search, session-agnostic proof
//   V2  encrypted search, session-agnostic proof
//   V3  encrypted search, app-layer nonce checked beside the proof
//   V4a core binding: nonce in pub[7], server keeps the result set
//   V4b full binding: nonce + Merkle root in pub[7], membership witness
//   V5  server-signed capability over (session, drop), proof session-agnostic
//   V6  server-signed permit, no proximity proof at all
//   V7  server MAC over the result set, proof session-agnostic
//   V8  hash of a server-signed token committed in pub[7]

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sbpp/protocol.hpp"

namespace sbpp::variants {

enum class Kind { V1, V2, V3, V4a, V4b, V5, V6, V7, V8 };

std::string_view kind_name(Kind k);
Kind parse_kind(std::string_view name);
const std::vector<Kind>& all_kinds();

/// What a V8 token carries besides (drop, pv, epoch).
enum class TokenContent {
    Equivalent,  ///< session id, nonce and result-set root
    DropOnly,    ///< nothing session-specific
};

struct VariantConfig {
    std::vector<geo::Drop> drops;
    Hash32 search_key{};
    std::uint64_t seed = 1;
    std::string pv = "1";
    std::string epoch_prefix = "ep";
    std::size_t epoch_every = 0;
    Timestamp ttl_seconds = session::kDefaultTtlSeconds;
    double unlock_radius_m = 100.0;
    std::vector<int> precisions = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    TokenContent v8_token = TokenContent::Equivalent;
    // Optional overrides; defaults derive from `seed`.
    std::shared_ptr<const nizk::Prover> prover;
    std::shared_ptr<const nizk::Verifier> verifier;
    std::shared_ptr<RandomSource> rng;
};

/// Result of a search as seen by the client.
struct Discovery {
    std::string session_id;
    std::vector<protocol::Candidate> candidates;
    std::string pv;
    std::string epoch;
    std::optional<Hash32> root;
    /// Session-wide artifact: receipt bytes (V4a/V4b) or MAC tag (V7).
    Bytes session_evidence;
    /// Per-drop artifacts: capability (V5), permit (V6) or token (V8).
    std::map<std::string, Bytes, std::less<>> drop_grants;
    /// Exact bytes the client sent to the server for this search.
    Bytes query;

    bool contains(std::string_view drop) const;
};

struct Request {
    std::string session_id;
    std::string drop;
    nizk::PublicInputs pub;
    std::optional<nizk::Proof> proof;
    std::optional<merkle::MerklePath> path;
    /// Variant-specific artifact sent beside the proof.
    Bytes sidecar;
};

/// Audit-log entry in a variant-neutral shape.
struct EvidenceRecord {
    Kind kind = Kind::V4b;
    std::string session_id;
    std::string drop;
    std::string pv;
    std::string epoch;
    Bytes evidence;
    merkle::MerklePath path;
    nizk::PublicInputs pub;
    std::optional<nizk::Proof> proof;
};

class Variant {
public:
    virtual ~Variant() = default;

    Kind kind() const { return kind_; }
    std::string_view name() const { return kind_name(kind_); }

    virtual session::SessionTicket open_session(Timestamp now);

    /// Client search at (lat, lon) plus the server's matching and binding.
    virtual Discovery discover(const session::SessionTicket& ticket, double lat, double lon,
                               double radius_m, Timestamp now) = 0;

    /// Public inputs this variant's client derives for `drop`.
    virtual nizk::PublicInputs public_inputs(const session::SessionTicket& ticket,
                                             const Discovery& discovery,
                                             std::string_view drop) const = 0;

    /// Honest client: refuses drops that were not returned.
    Request prove(const session::SessionTicket& ticket, const Discovery& discovery,
                  std::string_view drop, const nizk::Witness& witness) const;

    /// Builds a request without the membership precondition. When no grant
    /// exists for `drop` the best other grant the client holds is attached.
    Request build_request(const session::SessionTicket& ticket, const Discovery& discovery,
                          std::string_view drop, const nizk::Witness& witness) const;

    virtual protocol::VerifyOutcome verify(const Request& request, Timestamp now) = 0;

    virtual EvidenceRecord record(const Discovery& discovery, const Request& request) const;
    virtual protocol::AuditOutcome audit(const EvidenceRecord& record) const = 0;

    /// Rewrites the unauthenticated session fields of an intercepted request
    /// so it targets `attacker`'s session.
    virtual void rebind(Request& request, const session::SessionTicket& attacker) const;

    virtual bool uses_proof() const { return true; }

    /// Drops all live session state (the audit-after-purge setting).
    virtual void purge_state() { store().purge_all(); }

    virtual session::SessionStore& store() = 0;
    const protocol::DropTable& drops() const { return drops_; }
    const nizk::Verifier& verifier() const { return *verifier_; }

protected:
    Variant(Kind kind, const VariantConfig& config);

    /// Epoch label for the next session opened.
    std::string next_epoch();
    virtual Bytes sidecar_for(const session::SessionTicket& ticket, const Discovery& discovery,
                              std::string_view drop) const;
    virtual std::optional<merkle::MerklePath> path_for(const Discovery& discovery,
                                                       std::string_view drop) const;

    /// pub must describe `drop`'s published target and the proof must verify.
    bool statement_holds(std::string_view drop, const nizk::PublicInputs& pub,
                         const std::optional<nizk::Proof>& proof) const;
    nizk::PublicInputs target_inputs(std::string_view drop, const canon::FieldElement& digest) const;

    Kind kind_;
    VariantConfig config_;
    protocol::DropTable drops_;
    std::shared_ptr<const nizk::Prover> prover_;
    std::shared_ptr<const nizk::Verifier> verifier_;

private:
    std::mutex epoch_mutex_;
    std::size_t opened_ = 0;
};

std::unique_ptr<Variant> make_variant(Kind kind, VariantConfig config);

}  // namespace sbpp::variants
