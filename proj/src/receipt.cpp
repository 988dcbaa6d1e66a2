#include "sbpp/receipt.hpp"

#include <openssl/evp.h>

#include "sbpp/canon.hpp"

namespace sbpp::receipt {

namespace {

using PkeyPtr = std::unique_ptr<EVP_PKEY, decltype(&EVP_PKEY_free)>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

Timestamp parse_timestamp(const Bytes& field) {
    std::string s = to_string(field);
    if (s.empty() || s.size() > 19) throw ParseError("receipt: bad expiry");
    std::size_t start = s[0] == '-' ? 1 : 0;
    if (start == s.size()) throw ParseError("receipt: bad expiry");
    for (std::size_t i = start; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw ParseError("receipt: bad expiry");
    }
    return std::stoll(s);
}

}  // namespace

bool PublicKey::verify(ByteView message, ByteView signature) const {
    if (signature.size() != kSignatureSize) return false;
    PkeyPtr pkey(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, bytes.data(), bytes.size()),
                 &EVP_PKEY_free);
    if (!pkey) return false;
    MdCtxPtr ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1) {
        return false;
    }
    return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(), message.data(),
                            message.size()) == 1;
}

SigningKey SigningKey::from_secret(const Hash32& secret) {
    SigningKey k;
    k.secret_ = secret;
    EVP_PKEY* raw =
        EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, secret.data(), secret.size());
    if (!raw) throw Error("Ed25519 key construction failed");
    k.pkey_ = std::shared_ptr<EVP_PKEY>(raw, &EVP_PKEY_free);
    std::size_t len = kHashSize;
    if (EVP_PKEY_get_raw_public_key(raw, k.public_.bytes.data(), &len) != 1 || len != kHashSize) {
        throw Error("Ed25519 public key extraction failed");
    }
    return k;
}

SigningKey SigningKey::from_seed(std::uint64_t seed) {
    Bytes seed_bytes(8);
    for (int i = 0; i < 8; ++i) seed_bytes[7 - i] = static_cast<std::uint8_t>(seed >> (8 * i));
    return from_secret(canon::sha256(canon::Message{"SBPP-SERVER-KEY"}.add(seed_bytes).encode()));
}

Bytes SigningKey::sign(ByteView message) const {
    MdCtxPtr ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, pkey_.get()) != 1) {
        throw Error("Ed25519 sign init failed");
    }
    Bytes sig(kSignatureSize);
    std::size_t len = sig.size();
    if (EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(), message.size()) != 1) {
        throw Error("Ed25519 sign failed");
    }
    sig.resize(len);
    return sig;
}

KeyPair server_keygen(std::uint64_t seed) {
    auto k = SigningKey::from_seed(seed);
    return {k, k.public_key()};
}

Bytes Receipt::body() const {
    return canon::Message{kReceiptDomain}
        .add(fields.session_id)
        .add(fields.nonce)
        .add(std::to_string(fields.expires_at))
        .add(fields.root)
        .add(session::mode_name(fields.mode))
        .add(fields.pv)
        .add(fields.epoch)
        .encode();
}

Bytes Receipt::serialize() const {
    Bytes out = body();
    Bytes sig = canon::Message{}.add(signature).encode();
    out.insert(out.end(), sig.begin(), sig.end());
    return out;
}

Receipt Receipt::parse(ByteView data) {
    auto f = canon::lp_decode(data);
    if (f.size() != 9) throw ParseError("receipt: expected 9 fields");
    if (to_string(f[0]) != kReceiptDomain) throw ParseError("receipt: bad domain tag");
    if (f[2].size() != kHashSize || f[4].size() != kHashSize) {
        throw ParseError("receipt: nonce and root must be 32 bytes");
    }
    Receipt r;
    r.fields.session_id = to_string(f[1]);
    r.fields.nonce = to_hash32(f[2]);
    r.fields.expires_at = parse_timestamp(f[3]);
    r.fields.root = to_hash32(f[4]);
    r.fields.mode = session::parse_mode(to_string(f[5]));
    r.fields.pv = to_string(f[6]);
    r.fields.epoch = to_string(f[7]);
    r.signature = f[8];
    return r;
}

Receipt sign_receipt(const SigningKey& key, ReceiptFields fields) {
    Receipt r{std::move(fields), {}};
    r.signature = key.sign(r.body());
    return r;
}

bool verify_receipt(const PublicKey& key, const Receipt& receipt) {
    return key.verify(receipt.body(), receipt.signature);
}

}  // namespace sbpp::receipt
