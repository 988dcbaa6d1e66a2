#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>

#include "sbpp/bytes.hpp"

namespace sbpp {

/// Source of session ids and nonces.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual void fill(std::span<std::uint8_t> out) = 0;

    Hash32 next32() {
        Hash32 h{};
        fill(h);
        return h;
    }
};

/// OpenSSL CSPRNG.
class SystemRandom final : public RandomSource {
public:
    void fill(std::span<std::uint8_t> out) override;
};

/// SHA-256 counter-mode generator: reproducible from a 64-bit seed.
class SeededRandom final : public RandomSource {
public:
    explicit SeededRandom(std::uint64_t seed, std::string_view label = "sbpp-drbg");
    void fill(std::span<std::uint8_t> out) override;

private:
    std::mutex mutex_;
    Hash32 key_{};
    std::uint64_t counter_ = 0;
};

/// Deliberately weak issuer: output block i is SHA-256("predictable" || i),
/// which anyone can recompute. Only for the malicious-server experiment.
class PredictableRandom final : public RandomSource {
public:
    void fill(std::span<std::uint8_t> out) override;
    /// Output of the index-th fill() call (each call consumes one block).
    static Hash32 block(std::uint64_t index);
    std::uint64_t position() const { return counter_; }

private:
    std::mutex mutex_;
    std::uint64_t counter_ = 0;
};

std::shared_ptr<RandomSource> make_system_random();

}  // namespace sbpp
