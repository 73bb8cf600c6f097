#include "evolforge/hashing.hpp"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

namespace evolforge {

namespace {

std::string to_hex(const unsigned char* bytes, size_t n) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(n * 2);
    for (size_t i = 0; i < n; ++i) {
        out.push_back(digits[bytes[i] >> 4]);
        out.push_back(digits[bytes[i] & 0x0f]);
    }
    return out;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int md_len = 0;
    if (!EVP_Digest(data.data(), data.size(), md.data(), &md_len, EVP_sha256(), nullptr)) {
        throw std::runtime_error("EVP_Digest failed");
    }
    return to_hex(md.data(), md_len);
}

std::string digest128_hex(std::string_view data) {
    return sha256_hex(data).substr(0, 32);
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double hash_unit(std::uint64_t h) {
    // 53 high bits -> double in [0,1)
    return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

}  // namespace evolforge
