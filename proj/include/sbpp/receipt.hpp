#pragma once

// Server-signed session receipts (Ed25519, deterministic signatures).

#include <cstdint>
#include <memory>
#include <string>

#include "sbpp/bytes.hpp"
#include "sbpp/session.hpp"

typedef struct evp_pkey_st EVP_PKEY;

namespace sbpp::receipt {

inline constexpr std::string_view kReceiptDomain = "SBPP-RECEIPT";
inline constexpr std::size_t kSignatureSize = 64;

struct PublicKey {
    Hash32 bytes{};

    bool verify(ByteView message, ByteView signature) const;
    std::string to_hex() const { return sbpp::to_hex(bytes); }
    static PublicKey from_hex(std::string_view hex) { return {hash32_from_hex(hex)}; }
    bool operator==(const PublicKey&) const = default;
};

class SigningKey {
public:
    /// Deterministic keypair derived from a 64-bit seed.
    static SigningKey from_seed(std::uint64_t seed);
    /// Keypair from a raw 32-byte Ed25519 secret.
    static SigningKey from_secret(const Hash32& secret);

    Bytes sign(ByteView message) const;
    const PublicKey& public_key() const { return public_; }
    const Hash32& secret() const { return secret_; }

private:
    Hash32 secret_{};
    PublicKey public_;
    std::shared_ptr<EVP_PKEY> pkey_;
};

struct KeyPair {
    SigningKey signing;
    PublicKey public_key;
};

KeyPair server_keygen(std::uint64_t seed);

struct ReceiptFields {
    std::string session_id;
    Nonce nonce{};
    Timestamp expires_at = 0;
    Hash32 root{};  // all zero in core mode
    session::Mode mode = session::Mode::FullCompact;
    std::string pv;
    std::string epoch;

    bool operator==(const ReceiptFields&) const = default;
};

struct Receipt {
    ReceiptFields fields;
    Bytes signature;

    /// LP("SBPP-RECEIPT", S, N, decimal(t_exp), root, mode, pv, e)
    Bytes body() const;
    /// body || LP(signature)
    Bytes serialize() const;
    static Receipt parse(ByteView data);

    bool operator==(const Receipt&) const = default;
};

Receipt sign_receipt(const SigningKey& key, ReceiptFields fields);
bool verify_receipt(const PublicKey& key, const Receipt& receipt);

}  // namespace sbpp::receipt
