#pragma once

// Canonical encoding layer: length-prefixed field lists, SHA-256, and the
// challenge digests that bind a proof to its authorization context.

#include <compare>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "sbpp/bytes.hpp"

namespace sbpp::canon {

inline constexpr std::string_view kDomainDigest = "SBPP-v1";
inline constexpr std::string_view kDomainLeaf = "SBPP-LEAF";
inline constexpr std::string_view kDomainNode = "SBPP-NODE";

/// Element of the BN254 (a.k.a. BN128) scalar field, kept in canonical
/// 32-byte big-endian form. Always strictly less than the modulus.
class FieldElement {
public:
    FieldElement() = default;

    /// Interprets 32 big-endian bytes as an integer and reduces it mod Q.
    static FieldElement reduce(const Hash32& be_bytes);
    /// Builds from a small integer (always < Q).
    static FieldElement from_u64(std::uint64_t v);
    /// Parses canonical bytes; throws EncodingError if the value is >= Q.
    static FieldElement from_canonical(ByteView be_bytes);

    static const Hash32& modulus();

    const Hash32& bytes() const { return bytes_; }
    std::string to_hex() const;
    std::string to_decimal() const;
    /// Value as u64; throws EncodingError if it does not fit.
    std::uint64_t to_u64() const;

    auto operator<=>(const FieldElement&) const = default;

private:
    Hash32 bytes_{};
};

/// Writes std::uint32 big-endian length || bytes for every field.
/// Throws EncodingError when a field is 2^32 bytes or longer.
Bytes lp_encode(std::span<const Bytes> fields);

/// Inverse of lp_encode. Throws ParseError on truncated input.
std::vector<Bytes> lp_decode(ByteView encoded);

/// Incremental builder for a canonical field list.
class Message {
public:
    Message() = default;
    Message(std::initializer_list<std::string_view> fields);

    Message& add(std::string_view field);
    Message& add(ByteView field);
    Message& add(const Hash32& field) { return add(ByteView(field)); }
    Message& add(const Bytes& field) { return add(ByteView(field)); }

    const std::vector<Bytes>& fields() const { return fields_; }
    Bytes encode() const { return lp_encode(fields_); }

private:
    std::vector<Bytes> fields_;
};

Hash32 sha256(ByteView data);
Hash32 hmac_sha256(ByteView key, ByteView message);

/// SHA-256 of the LP encoding, reduced into the scalar field.
FieldElement digest(std::span<const Bytes> fields);
inline FieldElement digest(const Message& m) { return digest(m.fields()); }

/// Session-bound digest without a result-set commitment.
FieldElement cd_core(std::string_view drop, std::string_view pv, std::string_view epoch,
                     ByteView nonce);

/// Session-bound digest that also commits the result-set Merkle root.
FieldElement cd_full(std::string_view drop, std::string_view pv, std::string_view epoch,
                     ByteView nonce, ByteView root);

/// Session-agnostic drop context digest (drop, pv, epoch only).
FieldElement context_digest(std::string_view drop, std::string_view pv, std::string_view epoch);

}  // namespace sbpp::canon
