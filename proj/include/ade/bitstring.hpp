#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ade/rng.hpp"

namespace ade {

// Fixed-length packed bit vector. Length is immutable after construction.
// Wire convention: bit b lives in byte b/8 at bit position b%8 (LSB first);
// to_bytes()/from_bytes() are bit-exact under this rule.
class BitString {
public:
    BitString() = default;
    explicit BitString(size_t len) : len_(len), words_((len + 63) / 64, 0) {}

    static BitString random(size_t len, RngStream& rng);
    static BitString from_bytes(const std::vector<uint8_t>& bytes, size_t len);
    static BitString from_string(const std::string& zeros_and_ones);

    size_t size() const { return len_; }

    bool get(size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }
    void set(size_t i, bool v) {
        uint64_t mask = uint64_t{1} << (i & 63);
        if (v) words_[i >> 6] |= mask;
        else words_[i >> 6] &= ~mask;
    }
    void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

    size_t popcount() const;

    BitString& operator^=(const BitString& other);
    friend BitString operator^(BitString a, const BitString& b) { return a ^= b; }
    bool operator==(const BitString& other) const {
        return len_ == other.len_ && words_ == other.words_;
    }

    // Copies bits [start, start+count) into a fresh string; out-of-range reads
    // are zero (used for zero-padded trailing blocks).
    BitString slice_padded(size_t start, size_t count) const;
    void write_slice(size_t start, const BitString& bits, size_t count);

    std::vector<uint8_t> to_bytes() const;
    std::string to_string() const;

    const std::vector<uint64_t>& words() const { return words_; }

private:
    size_t len_ = 0;
    std::vector<uint64_t> words_;
};

size_t hamming_distance(const BitString& x, const BitString& y);

}  // namespace ade
