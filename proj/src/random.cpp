#include "sbpp/random.hpp"

#include <openssl/rand.h>

#include <algorithm>

#include "sbpp/canon.hpp"

namespace sbpp {

namespace {

Bytes u64_be(std::uint64_t v) {
    Bytes b(8);
    for (int i = 0; i < 8; ++i) b[7 - i] = static_cast<std::uint8_t>(v >> (8 * i));
    return b;
}

}  // namespace

void SystemRandom::fill(std::span<std::uint8_t> out) {
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
        throw Error("RAND_bytes failed");
    }
}

SeededRandom::SeededRandom(std::uint64_t seed, std::string_view label)
    : key_(canon::sha256(canon::Message{label}.add(u64_be(seed)).encode())) {}

void SeededRandom::fill(std::span<std::uint8_t> out) {
    std::lock_guard lock(mutex_);
    std::size_t pos = 0;
    while (pos < out.size()) {
        Hash32 block = canon::hmac_sha256(key_, u64_be(counter_++));
        std::size_t n = std::min(out.size() - pos, block.size());
        std::copy_n(block.begin(), n, out.begin() + pos);
        pos += n;
    }
}

Hash32 PredictableRandom::block(std::uint64_t index) {
    return canon::sha256(canon::Message{"predictable"}.add(u64_be(index)).encode());
}

void PredictableRandom::fill(std::span<std::uint8_t> out) {
    std::lock_guard lock(mutex_);
    Hash32 b = block(counter_++);
    if (out.size() > b.size()) throw Error("predictable source yields at most 32 bytes per call");
    std::copy_n(b.begin(), out.size(), out.begin());
}

std::shared_ptr<RandomSource> make_system_random() { return std::make_shared<SystemRandom>(); }

}  // namespace sbpp
