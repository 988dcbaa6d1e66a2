#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sbpp {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline constexpr std::size_t kHashSize = 32;
using Hash32 = std::array<std::uint8_t, kHashSize>;
using Nonce = Hash32;

/// Seconds since an arbitrary epoch. All protocol clocks are caller-supplied.
using Timestamp = std::int64_t;

/// Base class for every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EncodingError : public Error {
public:
    using Error::Error;
};

/// Malformed serialized input (corpus, index, audit record, ...).
class ParseError : public Error {
public:
    using Error::Error;
};

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);
Hash32 hash32_from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

inline std::string to_string(ByteView b) {
    return std::string(b.begin(), b.end());
}

inline Bytes to_bytes(const Hash32& h) {
    return Bytes(h.begin(), h.end());
}

Hash32 to_hash32(ByteView b);

}  // namespace sbpp
