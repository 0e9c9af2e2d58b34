#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace f2s {

/// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

/// First eight bytes of SHA-256 as an integer; used for seeded synthesis.
std::uint64_t hash64(std::string_view bytes);

std::string base64_encode(std::string_view bytes);

/// Throws f2s::ArgumentError on malformed input.
std::string base64_decode(std::string_view text);

}  // namespace f2s
