#pragma once

#include <cstdint>

#include "evolforge/hashing.hpp"

namespace evolforge {

// Deterministic splitmix64 stream. Used instead of <random> engines so that
// sequences are identical across platforms and standard library versions.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : state_(mix64(seed ^ 0x5eedf0d5eedf0d5eULL)) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    // Uniform in [0, n); n > 0. Lemire multiply-shift, no modulo bias issues
    // at the ranges we use.
    std::uint64_t bounded(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    double unit() { return hash_unit(next()); }

private:
    std::uint64_t state_;
};

}  // namespace evolforge
