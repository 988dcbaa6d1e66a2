#include <gtest/gtest.h>

#include <random>

#include "sbpp/geoindex.hpp"
#include "sbpp/nizk.hpp"
#include "vectors.hpp"

using namespace sbpp;
using namespace sbpp::nizk;
using sbpp::testing::vec;

namespace {

struct Backend {
    SimulatedKeys keys = setup(7);
    SimulatedProver prover{keys.proving_key};
    SimulatedVerifier verifier{keys.verifying_key};
};

const Hash32 kZero{};

canon::FieldElement fixed_digest() { return canon::cd_full("d1", "1", "ep0", kZero, kZero); }

}  // namespace

TEST(Nizk, FrozenPublicInputsAndTag) {
    Backend b;
    auto pub = make_public_inputs(35.6812, 139.7671, 100, fixed_digest());
    EXPECT_EQ(to_hex(pub.canonical_bytes()), vec("pub_fixed"));
    auto proof = b.prover.prove({35.6812, 139.7671}, pub);
    EXPECT_EQ(proof.backend_id, kSimulatedBackendId);
    EXPECT_EQ(to_hex(proof.body), vec("proof_tag_fixed_seed7"));
}

TEST(Nizk, HonestProofVerifies) {
    Backend b;
    auto pub = make_public_inputs(35.6812, 139.7671, 100, fixed_digest());
    // ~50 m north
    auto proof = b.prover.prove({35.6812 + 0.00045, 139.7671}, pub);
    EXPECT_TRUE(b.verifier.verify(pub, proof));
}

TEST(Nizk, FalseStatementIsRefused) {
    Backend b;
    auto pub = make_public_inputs(35.6812, 139.7671, 100, fixed_digest());
    // ~150 m north
    EXPECT_THROW(b.prover.prove({35.6812 + 0.00135, 139.7671}, pub), StatementFalse);
}

TEST(Nizk, RadiusBoundaryIsInclusive) {
    Backend b;
    auto pub = make_public_inputs(0, 0, 100, fixed_digest());
    auto t = decode_target(pub);
    double dlat = 100.0 / geo::kEarthRadiusM * 180.0 / 3.141592653589793;
    EXPECT_NO_THROW(b.prover.prove({t.lat + dlat * 0.999999, t.lon}, pub));
    EXPECT_THROW(b.prover.prove({t.lat + dlat * 1.0001, t.lon}, pub), StatementFalse);
}

TEST(NizkProperty, RandomProofsRejected) {
    Backend b;
    std::mt19937_64 gen(4);
    auto pub = make_public_inputs(35.6812, 139.7671, 100, fixed_digest());
    for (int i = 0; i < 10'000; ++i) {
        Proof p{std::string(kSimulatedBackendId), Bytes(kHashSize)};
        for (auto& x : p.body) x = static_cast<std::uint8_t>(gen());
        ASSERT_FALSE(b.verifier.verify(pub, p));
    }
}

// A proof for one digest never verifies under a different digest.
TEST(NizkProperty, ProofBindsDigest) {
    Backend b;
    Hash32 n{};
    for (int i = 0; i < 1000; ++i) {
        n[0] = static_cast<std::uint8_t>(i);
        n[1] = static_cast<std::uint8_t>(i >> 8);
        auto pub = make_public_inputs(35.6812, 139.7671, 100, canon::cd_core("d1", "1", "ep0", n));
        auto proof = b.prover.prove({35.6812, 139.7671}, pub);
        auto other = pub;
        other.digest() = canon::cd_core("d2", "1", "ep0", n);
        ASSERT_FALSE(b.verifier.verify(other, proof));
    }
}

TEST(Nizk, EverySlotIsBound) {
    Backend b;
    auto pub = make_public_inputs(35.6812, 139.7671, 100, fixed_digest());
    auto proof = b.prover.prove({35.6812, 139.7671}, pub);
    for (std::size_t i = 0; i < kPublicInputCount; ++i) {
        auto alt = pub;
        alt.values[i] = i == kDigestSlot ? canon::cd_full("d1", "1", "ep1", kZero, kZero)
                                         : canon::FieldElement::from_u64(pub.values[i].to_u64() + 1);
        EXPECT_FALSE(b.verifier.verify(alt, proof)) << "slot " << i;
    }
}

TEST(Nizk, OtherSetupKeyRejects) {
    Backend b;
    auto other = setup(8);
    SimulatedVerifier v(other.verifying_key);
    auto pub = make_public_inputs(35.6812, 139.7671, 100, fixed_digest());
    EXPECT_FALSE(v.verify(pub, b.prover.prove({35.6812, 139.7671}, pub)));
}

TEST(Nizk, WrongBackendOrLengthRejected) {
    Backend b;
    auto pub = make_public_inputs(35.6812, 139.7671, 100, fixed_digest());
    auto proof = b.prover.prove({35.6812, 139.7671}, pub);
    auto renamed = proof;
    renamed.backend_id = "groth16";
    EXPECT_FALSE(b.verifier.verify(pub, renamed));
    auto shortened = proof;
    shortened.body.pop_back();
    EXPECT_FALSE(b.verifier.verify(pub, shortened));
}

TEST(Nizk, SerializationRoundTrip) {
    Backend b;
    auto pub = make_public_inputs(-33.8688, 151.2093, 250, fixed_digest());
    EXPECT_EQ(PublicInputs::parse(pub.canonical_bytes()), pub);
    auto t = decode_target(pub);
    EXPECT_NEAR(t.lat, -33.8688, 1e-7);
    EXPECT_NEAR(t.lon, 151.2093, 1e-7);
    EXPECT_EQ(t.radius_m, 250);
    auto proof = b.prover.prove({-33.8688, 151.2093}, pub);
    EXPECT_EQ(Proof::parse(proof.serialize()), proof);
    EXPECT_THROW(PublicInputs::parse(Bytes(255)), ParseError);
    Bytes over(256, 0);
    std::fill(over.begin(), over.begin() + 32, 0xff);
    EXPECT_THROW(PublicInputs::parse(over), ParseError);
    EXPECT_THROW(Proof::parse(Bytes{0, 0, 0, 9, 'x'}), ParseError);
}

TEST(Nizk, DistanceAgreesWithHaversineAtShortRange) {
    EXPECT_NEAR(distance_m(35.6812, 139.7671, 35.6812 + 0.0009, 139.7671 + 0.0009),
                geo::haversine_m(35.6812, 139.7671, 35.6812 + 0.0009, 139.7671 + 0.0009), 0.01);
}
