#pragma once

// Proximity-proof backend interface plus a simulated backend.
//
// The simulated backend is a keyed MAC over the public inputs: sound and
// binding for anyone without the setup secret, but NOT zero-knowledge and
// NOT publicly verifiable. It exists so the protocol can be exercised
// end-to-end; a pairing-based backend can implement the same interfaces.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "sbpp/bytes.hpp"
#include "sbpp/canon.hpp"

namespace sbpp::nizk {

inline constexpr std::size_t kPublicInputCount = 8;
inline constexpr std::size_t kDigestSlot = 7;
inline constexpr double kCoordinateScale = 1e7;

/// pub[0] = (lat+90)*1e7, pub[1] = (lon+180)*1e7, pub[2] = radius (m),
/// pub[3..6] = 0, pub[7] = challenge digest.
struct PublicInputs {
    std::array<canon::FieldElement, kPublicInputCount> values{};

    const canon::FieldElement& digest() const { return values[kDigestSlot]; }
    canon::FieldElement& digest() { return values[kDigestSlot]; }

    /// 8 x 32-byte big-endian elements.
    Bytes canonical_bytes() const;
    static PublicInputs parse(ByteView data);

    bool operator==(const PublicInputs&) const = default;
};

PublicInputs make_public_inputs(double target_lat, double target_lon, double radius_m,
                                const canon::FieldElement& digest);

struct Target {
    double lat = 0;
    double lon = 0;
    double radius_m = 0;
};

Target decode_target(const PublicInputs& pub);

struct Witness {
    double lat = 0;
    double lon = 0;
};

struct Proof {
    std::string backend_id;
    Bytes body;

    /// LP(backend_id) || body
    Bytes serialize() const;
    static Proof parse(ByteView data);

    bool operator==(const Proof&) const = default;
};

class StatementFalse : public Error {
public:
    using Error::Error;
};

/// Equirectangular distance, meters: R * sqrt(dphi^2 + (cos(phi_m) * dlambda)^2).
double distance_m(double lat1, double lon1, double lat2, double lon2);

class Prover {
public:
    virtual ~Prover() = default;
    virtual std::string_view backend_id() const = 0;
    /// Throws StatementFalse when the witness is outside the radius.
    virtual Proof prove(const Witness& witness, const PublicInputs& pub) const = 0;
};

/// Verification sees only the public inputs and the proof.
class Verifier {
public:
    virtual ~Verifier() = default;
    virtual bool verify(const PublicInputs& pub, const Proof& proof) const = 0;
};

inline constexpr std::string_view kSimulatedBackendId = "sim-hmac-v1";

struct SimulatedKeys {
    Hash32 proving_key{};
    Hash32 verifying_key{};
};

/// Stand-in for a trusted setup: both keys derive from the seed and are equal.
SimulatedKeys setup(std::uint64_t seed);

class SimulatedProver final : public Prover {
public:
    explicit SimulatedProver(const Hash32& proving_key) : key_(proving_key) {}
    std::string_view backend_id() const override { return kSimulatedBackendId; }
    Proof prove(const Witness& witness, const PublicInputs& pub) const override;

private:
    Hash32 key_;
};

class SimulatedVerifier final : public Verifier {
public:
    explicit SimulatedVerifier(const Hash32& verifying_key) : key_(verifying_key) {}
    bool verify(const PublicInputs& pub, const Proof& proof) const override;

private:
    Hash32 key_;
};

}  // namespace sbpp::nizk
