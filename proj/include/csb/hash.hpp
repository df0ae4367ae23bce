#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace csb {

/// Hex-encoded SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// First 16 hex chars of SHA-256; used for content-derived ids.
std::string short_hash(std::string_view data);

/// 64-bit value folded from SHA-256; used to seed deterministic RNG streams.
uint64_t hash64(std::string_view data);

}  // namespace csb
