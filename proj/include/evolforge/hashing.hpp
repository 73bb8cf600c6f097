#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace evolforge {

// SHA-256 of `data`, hex-encoded (64 chars).
std::string sha256_hex(std::string_view data);

// First 128 bits of SHA-256, hex-encoded (32 chars). Used for content ids
// and config digests.
std::string digest128_hex(std::string_view data);

// splitmix64 finalizer; the workhorse behind the seeded hash families.
std::uint64_t mix64(std::uint64_t x);

// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view data);

inline std::uint64_t combine_hash(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ mix64(b));
}

// Maps a hash to [0,1).
double hash_unit(std::uint64_t h);

}  // namespace evolforge
