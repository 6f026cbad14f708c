#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace ade {

// splitmix64 finalizer; bijective on 64-bit words.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a over a label string; used only for domain separation.
inline uint64_t domain_label(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char ch : s) {
        h ^= static_cast<uint8_t>(ch);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Derives a child seed from (base, path...). Distinct paths give
// independent streams; the chain is order-sensitive.
inline uint64_t derive_seed(uint64_t base, std::initializer_list<uint64_t> path) {
    uint64_t h = mix64(base ^ 0x5851f42d4c957f2dULL);
    for (uint64_t p : path) h = mix64(h ^ mix64(p));
    return h;
}

inline uint64_t derive_seed(uint64_t base, std::string_view label,
                            std::initializer_list<uint64_t> path = {}) {
    uint64_t h = derive_seed(base, {domain_label(label)});
    for (uint64_t p : path) h = mix64(h ^ mix64(p));
    return h;
}

// Deterministic 64-bit stream (splitmix64). All reductions below are
// fully specified arithmetic, so sequences replay across platforms.
class RngStream {
public:
    explicit RngStream(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, m); Lemire reduction (bias < 2^-64, immaterial here).
    uint64_t next_below(uint64_t m) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * m) >> 64);
    }

    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool next_bool() { return (next_u64() & 1) != 0; }

private:
    uint64_t state_;
};

}  // namespace ade
