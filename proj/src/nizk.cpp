#include "sbpp/nizk.hpp"

#include <openssl/crypto.h>

#include <cmath>
#include <numbers>

#include "sbpp/geoindex.hpp"

namespace sbpp::nizk {

namespace {

constexpr std::string_view kProofDomain = "SBPP-PROOF";

double to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

Hash32 proof_tag(const Hash32& key, const PublicInputs& pub) {
    canon::Message m{kProofDomain};
    for (const auto& v : pub.values) m.add(v.bytes());
    return canon::hmac_sha256(key, m.encode());
}

}  // namespace

Bytes PublicInputs::canonical_bytes() const {
    Bytes out;
    out.reserve(kPublicInputCount * kHashSize);
    for (const auto& v : values) out.insert(out.end(), v.bytes().begin(), v.bytes().end());
    return out;
}

PublicInputs PublicInputs::parse(ByteView data) {
    if (data.size() != kPublicInputCount * kHashSize) {
        throw ParseError("public inputs must be 256 bytes");
    }
    PublicInputs pub;
    for (std::size_t i = 0; i < kPublicInputCount; ++i) {
        try {
            pub.values[i] = canon::FieldElement::from_canonical(data.subspan(i * kHashSize, kHashSize));
        } catch (const EncodingError& e) {
            throw ParseError(std::string("public input: ") + e.what());
        }
    }
    return pub;
}

PublicInputs make_public_inputs(double target_lat, double target_lon, double radius_m,
                                const canon::FieldElement& digest) {
    geo::check_coordinates(target_lat, target_lon);
    if (!(radius_m >= 0)) throw Error("radius must be non-negative");
    PublicInputs pub;
    pub.values[0] = canon::FieldElement::from_u64(
        static_cast<std::uint64_t>(std::llround((target_lat + 90.0) * kCoordinateScale)));
    pub.values[1] = canon::FieldElement::from_u64(
        static_cast<std::uint64_t>(std::llround((target_lon + 180.0) * kCoordinateScale)));
    pub.values[2] = canon::FieldElement::from_u64(static_cast<std::uint64_t>(std::llround(radius_m)));
    pub.values[kDigestSlot] = digest;
    return pub;
}

Target decode_target(const PublicInputs& pub) {
    Target t;
    t.lat = static_cast<double>(pub.values[0].to_u64()) / kCoordinateScale - 90.0;
    t.lon = static_cast<double>(pub.values[1].to_u64()) / kCoordinateScale - 180.0;
    t.radius_m = static_cast<double>(pub.values[2].to_u64());
    return t;
}

Bytes Proof::serialize() const {
    Bytes out = canon::Message{backend_id}.encode();
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

Proof Proof::parse(ByteView data) {
    if (data.size() < 4) throw ParseError("proof: truncated");
    std::uint32_t len = (std::uint32_t{data[0]} << 24) | (std::uint32_t{data[1]} << 16) |
                        (std::uint32_t{data[2]} << 8) | std::uint32_t{data[3]};
    if (data.size() - 4 < len) throw ParseError("proof: truncated backend id");
    Proof p;
    p.backend_id = to_string(data.subspan(4, len));
    auto rest = data.subspan(4 + len);
    p.body.assign(rest.begin(), rest.end());
    return p;
}

double distance_m(double lat1, double lon1, double lat2, double lon2) {
    double dphi = to_rad(lat2 - lat1);
    double dlambda = to_rad(lon2 - lon1);
    double phi_m = to_rad((lat1 + lat2) / 2);
    double x = std::cos(phi_m) * dlambda;
    return geo::kEarthRadiusM * std::sqrt(dphi * dphi + x * x);
}

SimulatedKeys setup(std::uint64_t seed) {
    Bytes seed_bytes(8);
    for (int i = 0; i < 8; ++i) seed_bytes[7 - i] = static_cast<std::uint8_t>(seed >> (8 * i));
    Hash32 k = canon::sha256(canon::Message{"SBPP-SIM-SETUP"}.add(seed_bytes).encode());
    return {k, k};
}

Proof SimulatedProver::prove(const Witness& witness, const PublicInputs& pub) const {
    geo::check_coordinates(witness.lat, witness.lon);
    Target t = decode_target(pub);
    double d = distance_m(witness.lat, witness.lon, t.lat, t.lon);
    if (d > t.radius_m) {
        throw StatementFalse("witness is " + std::to_string(d) + " m from target, radius " +
                             std::to_string(t.radius_m) + " m");
    }
    auto tag = proof_tag(key_, pub);
    return {std::string(kSimulatedBackendId), Bytes(tag.begin(), tag.end())};
}

bool SimulatedVerifier::verify(const PublicInputs& pub, const Proof& proof) const {
    if (proof.backend_id != kSimulatedBackendId || proof.body.size() != kHashSize) return false;
    auto tag = proof_tag(key_, pub);
    return CRYPTO_memcmp(tag.data(), proof.body.data(), kHashSize) == 0;
}

}  // namespace sbpp::nizk
