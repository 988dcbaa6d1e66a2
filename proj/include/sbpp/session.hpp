#pragma once

// Server-side session lifecycle: issue, bind results, validate, consume.

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sbpp/bytes.hpp"
#include "sbpp/random.hpp"

namespace sbpp::session {

inline constexpr Timestamp kDefaultTtlSeconds = 300;
inline constexpr std::size_t kSessionIdBytes = 16;

enum class Mode : std::uint8_t {
    CoreStateful,  ///< server keeps the result set, nonce-only digest
    FullCompact,   ///< server keeps only the Merkle root
};

std::string_view mode_name(Mode m);  // "core" | "full"
Mode parse_mode(std::string_view name);

enum class SessionErrc {
    UnknownSession,
    Expired,
    AlreadyConsumed,
    AlreadyBound,
    EmptyResultSet,
};

std::string_view errc_name(SessionErrc c);

class SessionError : public Error {
public:
    SessionError(SessionErrc code, const std::string& what) : Error(what), code_(code) {}
    SessionErrc code() const { return code_; }

private:
    SessionErrc code_;
};

/// What the client learns at issuance: (S, N, t_exp).
struct SessionTicket {
    std::string id;
    Nonce nonce{};
    Timestamp expires_at = 0;
};

struct SessionRecord {
    std::string id;
    Nonce nonce{};
    Timestamp issued_at = 0;
    Timestamp expires_at = 0;
    std::optional<Mode> mode;
    std::optional<std::vector<std::string>> result_set;  // core only
    std::optional<Hash32> root;                          // full only
    std::string pv;
    std::string epoch;
    bool consumed = false;

    bool bound() const { return mode.has_value(); }
};

/// Verifier-state serialization: what the server must retain to check an
/// unlock. Constant size in compact mode, O(|R|) in stateful mode.
Bytes verifier_state(const SessionRecord& r);

struct LifecycleStats {
    std::size_t issued = 0;
    std::size_t consumed = 0;
    std::size_t expired = 0;  // unconsumed and past t_exp (stored or purged)
    std::size_t pending = 0;  // unconsumed and still live
    std::size_t discarded = 0;  // dropped by purge_all while live
};

/// Thread-safe in-memory session store. Mutations are serialized; consume()
/// is a compare-and-swap on the consumed flag.
class SessionStore {
public:
    explicit SessionStore(std::shared_ptr<RandomSource> rng = make_system_random(),
                          Timestamp ttl_seconds = kDefaultTtlSeconds);

    SessionTicket issue(Timestamp now, std::string pv = "1", std::string epoch = "ep0");

    /// Stores the ids (core) or only their Merkle root (full). Ids must be
    /// sorted, unique and non-empty. Returns the root in full mode.
    std::optional<Hash32> bind_results(const std::string& id, std::vector<std::string> ids,
                                       Mode mode, Timestamp now);

    /// Returns a snapshot iff the session exists, now < t_exp and it is not
    /// consumed. Expired records are purged on access.
    SessionRecord validate(const std::string& id, Timestamp now);

    /// Exactly one caller ever gets true for a given session.
    bool consume(const std::string& id);

    std::optional<SessionRecord> find(const std::string& id) const;

    std::size_t purge_expired(Timestamp now);
    void purge_all();

    LifecycleStats stats(Timestamp now) const;
    std::size_t size() const;
    /// Rough heap footprint of stored records.
    std::size_t approx_bytes() const;
    Timestamp ttl() const { return ttl_; }

private:
    mutable std::mutex mutex_;
    std::shared_ptr<RandomSource> rng_;
    Timestamp ttl_;
    std::unordered_map<std::string, SessionRecord> records_;
    std::size_t issued_ = 0;
    std::size_t consumed_ = 0;
    std::size_t expired_purged_ = 0;
    std::size_t discarded_ = 0;
};

}  // namespace sbpp::session
