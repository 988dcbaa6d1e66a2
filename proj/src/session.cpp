#include "sbpp/session.hpp"

#include "sbpp/canon.hpp"
#include "sbpp/merkle.hpp"

namespace sbpp::session {

std::string_view mode_name(Mode m) { return m == Mode::CoreStateful ? "core" : "full"; }

Mode parse_mode(std::string_view name) {
    if (name == "core") return Mode::CoreStateful;
    if (name == "full") return Mode::FullCompact;
    throw ParseError("unknown mode: " + std::string(name));
}

std::string_view errc_name(SessionErrc c) {
    switch (c) {
        case SessionErrc::UnknownSession: return "unknown-session";
        case SessionErrc::Expired: return "expired";
        case SessionErrc::AlreadyConsumed: return "already-consumed";
        case SessionErrc::AlreadyBound: return "already-bound";
        case SessionErrc::EmptyResultSet: return "empty-result-set";
    }
    return "?";
}

Bytes verifier_state(const SessionRecord& r) {
    canon::Message m;
    m.add(r.id).add(r.nonce).add(std::to_string(r.expires_at));
    m.add(r.mode ? mode_name(*r.mode) : std::string_view("unbound"));
    if (r.root) m.add(*r.root);
    if (r.result_set) {
        for (const auto& id : *r.result_set) m.add(id);
    }
    return m.encode();
}

SessionStore::SessionStore(std::shared_ptr<RandomSource> rng, Timestamp ttl_seconds)
    : rng_(std::move(rng)), ttl_(ttl_seconds) {
    if (!rng_) throw Error("session store needs a random source");
}

SessionTicket SessionStore::issue(Timestamp now, std::string pv, std::string epoch) {
    std::lock_guard lock(mutex_);
    SessionRecord r;
    do {
        std::array<std::uint8_t, kSessionIdBytes> sid{};
        rng_->fill(sid);
        r.id = to_hex(sid);
    } while (records_.count(r.id) != 0);
    r.nonce = rng_->next32();
    r.issued_at = now;
    r.expires_at = now + ttl_;
    r.pv = std::move(pv);
    r.epoch = std::move(epoch);
    SessionTicket t{r.id, r.nonce, r.expires_at};
    records_.emplace(r.id, std::move(r));
    ++issued_;
    return t;
}

std::optional<Hash32> SessionStore::bind_results(const std::string& id,
                                                 std::vector<std::string> ids, Mode mode,
                                                 Timestamp now) {
    if (ids.empty()) throw SessionError(SessionErrc::EmptyResultSet, "empty result set");
    // Builds (and validates ordering) outside the lock.
    std::optional<Hash32> root;
    if (mode == Mode::FullCompact) {
        root = merkle::MerkleTree::build(std::move(ids)).root();
        ids.clear();
    } else {
        for (std::size_t i = 1; i < ids.size(); ++i) {
            if (!(ids[i - 1] < ids[i])) throw merkle::MerkleError("ids must be sorted and unique");
        }
    }
    std::lock_guard lock(mutex_);
    auto it = records_.find(id);
    if (it == records_.end()) throw SessionError(SessionErrc::UnknownSession, "unknown session");
    auto& r = it->second;
    if (r.consumed) throw SessionError(SessionErrc::AlreadyConsumed, "session already consumed");
    if (now >= r.expires_at) throw SessionError(SessionErrc::Expired, "session expired");
    if (r.bound()) throw SessionError(SessionErrc::AlreadyBound, "session already bound");
    r.mode = mode;
    if (mode == Mode::FullCompact) {
        r.root = root;
    } else {
        r.result_set = std::move(ids);
    }
    return root;
}

SessionRecord SessionStore::validate(const std::string& id, Timestamp now) {
    std::lock_guard lock(mutex_);
    auto it = records_.find(id);
    if (it == records_.end()) throw SessionError(SessionErrc::UnknownSession, "unknown session");
    if (it->second.consumed) {
        throw SessionError(SessionErrc::AlreadyConsumed, "session already consumed");
    }
    if (now >= it->second.expires_at) {
        records_.erase(it);
        ++expired_purged_;
        throw SessionError(SessionErrc::Expired, "session expired");
    }
    return it->second;
}

bool SessionStore::consume(const std::string& id) {
    std::lock_guard lock(mutex_);
    auto it = records_.find(id);
    if (it == records_.end() || it->second.consumed) return false;
    it->second.consumed = true;
    ++consumed_;
    return true;
}

std::optional<SessionRecord> SessionStore::find(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = records_.find(id);
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

std::size_t SessionStore::purge_expired(Timestamp now) {
    std::lock_guard lock(mutex_);
    std::size_t n = 0;
    for (auto it = records_.begin(); it != records_.end();) {
        if (now >= it->second.expires_at) {
            if (!it->second.consumed) ++expired_purged_;
            it = records_.erase(it);
            ++n;
        } else {
            ++it;
        }
    }
    return n;
}

void SessionStore::purge_all() {
    std::lock_guard lock(mutex_);
    for (const auto& [id, r] : records_) {
        if (!r.consumed) ++discarded_;
    }
    records_.clear();
}

LifecycleStats SessionStore::stats(Timestamp now) const {
    std::lock_guard lock(mutex_);
    LifecycleStats s;
    s.issued = issued_;
    s.consumed = consumed_;
    s.expired = expired_purged_;
    s.discarded = discarded_;
    for (const auto& [id, r] : records_) {
        if (r.consumed) continue;
        if (now >= r.expires_at) {
            ++s.expired;
        } else {
            ++s.pending;
        }
    }
    return s;
}

std::size_t SessionStore::size() const {
    std::lock_guard lock(mutex_);
    return records_.size();
}

std::size_t SessionStore::approx_bytes() const {
    std::lock_guard lock(mutex_);
    std::size_t total = 0;
    for (const auto& [key, r] : records_) {
        total += sizeof(SessionRecord) + key.capacity() + r.id.capacity() + r.pv.capacity() +
                 r.epoch.capacity();
        if (r.result_set) {
            for (const auto& id : *r.result_set) total += sizeof(std::string) + id.capacity();
        }
    }
    return total;
}

}  // namespace sbpp::session
