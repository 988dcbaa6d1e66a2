#include "sbpp/canon.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <algorithm>
#include <limits>

namespace sbpp::canon {

namespace {

// 21888242871839275222246405745257275088548364400416034343698204186575808495617
constexpr Hash32 kModulus = {
    0x30, 0x64, 0x4e, 0x72, 0xe1, 0x31, 0xa0, 0x29, 0xb8, 0x50, 0x45, 0xb6, 0x81, 0x81, 0x58, 0x5d,
    0x28, 0x33, 0xe8, 0x48, 0x79, 0xb9, 0x70, 0x91, 0x43, 0xe1, 0xf5, 0x93, 0xf0, 0x00, 0x00, 0x01,
};

bool less_than(const Hash32& a, const Hash32& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void subtract_in_place(Hash32& a, const Hash32& b) {
    int borrow = 0;
    for (int i = kHashSize - 1; i >= 0; --i) {
        int d = static_cast<int>(a[i]) - static_cast<int>(b[i]) - borrow;
        borrow = d < 0 ? 1 : 0;
        a[i] = static_cast<std::uint8_t>(d + (borrow ? 256 : 0));
    }
}

void check_length(ByteView v, std::string_view what) {
    if (v.size() != kHashSize) {
        throw EncodingError(std::string(what) + " must be 32 bytes, got " +
                            std::to_string(v.size()));
    }
}

}  // namespace

FieldElement FieldElement::reduce(const Hash32& be_bytes) {
    // 2^256 / Q < 6, so a handful of subtractions suffice.
    FieldElement fe;
    fe.bytes_ = be_bytes;
    while (!less_than(fe.bytes_, kModulus)) subtract_in_place(fe.bytes_, kModulus);
    return fe;
}

FieldElement FieldElement::from_u64(std::uint64_t v) {
    FieldElement fe;
    for (int i = 0; i < 8; ++i) {
        fe.bytes_[kHashSize - 1 - i] = static_cast<std::uint8_t>(v >> (8 * i));
    }
    return fe;
}

FieldElement FieldElement::from_canonical(ByteView be_bytes) {
    check_length(be_bytes, "field element");
    FieldElement fe;
    std::copy(be_bytes.begin(), be_bytes.end(), fe.bytes_.begin());
    if (!less_than(fe.bytes_, kModulus)) throw EncodingError("field element not reduced");
    return fe;
}

const Hash32& FieldElement::modulus() { return kModulus; }

std::string FieldElement::to_hex() const { return sbpp::to_hex(bytes_); }

std::string FieldElement::to_decimal() const {
    Hash32 n = bytes_;
    std::string digits;
    auto is_zero = [&] { return std::all_of(n.begin(), n.end(), [](auto b) { return b == 0; }); };
    if (is_zero()) return "0";
    while (!is_zero()) {
        unsigned rem = 0;
        for (auto& b : n) {
            unsigned cur = (rem << 8) | b;
            b = static_cast<std::uint8_t>(cur / 10);
            rem = cur % 10;
        }
        digits.push_back(static_cast<char>('0' + rem));
    }
    std::reverse(digits.begin(), digits.end());
    return digits;
}

std::uint64_t FieldElement::to_u64() const {
    for (std::size_t i = 0; i < kHashSize - 8; ++i) {
        if (bytes_[i] != 0) throw EncodingError("field element exceeds 64 bits");
    }
    std::uint64_t v = 0;
    for (std::size_t i = kHashSize - 8; i < kHashSize; ++i) v = (v << 8) | bytes_[i];
    return v;
}

Bytes lp_encode(std::span<const Bytes> fields) {
    std::size_t total = 0;
    for (const auto& f : fields) total += 4 + f.size();
    Bytes out;
    out.reserve(total);
    for (const auto& f : fields) {
        if (f.size() > std::numeric_limits<std::uint32_t>::max()) {
            throw EncodingError("field exceeds 2^32-1 bytes");
        }
        auto len = static_cast<std::uint32_t>(f.size());
        out.push_back(static_cast<std::uint8_t>(len >> 24));
        out.push_back(static_cast<std::uint8_t>(len >> 16));
        out.push_back(static_cast<std::uint8_t>(len >> 8));
        out.push_back(static_cast<std::uint8_t>(len));
        out.insert(out.end(), f.begin(), f.end());
    }
    return out;
}

std::vector<Bytes> lp_decode(ByteView encoded) {
    std::vector<Bytes> fields;
    std::size_t pos = 0;
    while (pos < encoded.size()) {
        if (encoded.size() - pos < 4) throw ParseError("truncated length prefix");
        std::uint32_t len = (std::uint32_t{encoded[pos]} << 24) |
                            (std::uint32_t{encoded[pos + 1]} << 16) |
                            (std::uint32_t{encoded[pos + 2]} << 8) | std::uint32_t{encoded[pos + 3]};
        pos += 4;
        if (encoded.size() - pos < len) throw ParseError("truncated field body");
        fields.emplace_back(encoded.begin() + pos, encoded.begin() + pos + len);
        pos += len;
    }
    return fields;
}

Message::Message(std::initializer_list<std::string_view> fields) {
    for (auto f : fields) add(f);
}

Message& Message::add(std::string_view field) {
    fields_.push_back(to_bytes(field));
    return *this;
}

Message& Message::add(ByteView field) {
    fields_.emplace_back(field.begin(), field.end());
    return *this;
}

Hash32 sha256(ByteView data) {
    Hash32 out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 failed");
    }
    return out;
}

Hash32 hmac_sha256(ByteView key, ByteView message) {
    Hash32 out{};
    unsigned int len = 0;
    if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), message.data(),
             message.size(), out.data(), &len) == nullptr) {
        throw Error("HMAC-SHA256 failed");
    }
    return out;
}

FieldElement digest(std::span<const Bytes> fields) {
    return FieldElement::reduce(sha256(lp_encode(fields)));
}

FieldElement cd_core(std::string_view drop, std::string_view pv, std::string_view epoch,
                     ByteView nonce) {
    check_length(nonce, "nonce");
    return digest(Message{kDomainDigest, drop, pv, epoch}.add(nonce));
}

FieldElement cd_full(std::string_view drop, std::string_view pv, std::string_view epoch,
                     ByteView nonce, ByteView root) {
    check_length(nonce, "nonce");
    check_length(root, "root");
    return digest(Message{kDomainDigest, drop, pv, epoch}.add(nonce).add(root));
}

FieldElement context_digest(std::string_view drop, std::string_view pv, std::string_view epoch) {
    return digest(Message{drop, pv, epoch});
}

}  // namespace sbpp::canon
