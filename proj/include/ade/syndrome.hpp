#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ade/bitstring.hpp"

namespace ade {

// Vector over GF(2^w), w in [4, 16]. Symbol count is bounded by 2^w - 1
// minus the redundancy (RS length bound).
struct SymbolBlock {
    unsigned width = 8;
    std::vector<uint16_t> symbols;

    bool operator==(const SymbolBlock&) const = default;
};

// Packs len bits into ceil(len/w) symbols, LSB-first within each symbol;
// the last symbol is zero-padded.
SymbolBlock bits_to_symbols(const BitString& x, unsigned w);
BitString symbols_to_bits(const SymbolBlock& b, size_t len);

// Redundancy (2e symbols) of a systematic Reed-Solomon code with minimum
// distance 2e+1 over the data. Pure function of (data, e, width).
SymbolBlock rs_syndrome(const SymbolBlock& data, size_t e);

// Decodes data ∥ redundancy as one RS codeword; exact data when at most e
// symbols anywhere in the codeword are corrupted, nullopt on decode failure.
std::optional<SymbolBlock> rs_correct(const SymbolBlock& corrupted,
                                      const SymbolBlock& redundancy, size_t e);

// Smallest w in [4, 16] with ceil(bits/w) + 2e <= 2^w - 1; throws when no
// width fits.
unsigned rs_pick_width(size_t bits, size_t e);

// Wire format: width (1 byte), symbol count (4 bytes big-endian), packed
// symbols (w bits each, LSB-first, byte-padded).
std::vector<uint8_t> serialize_symbols(const SymbolBlock& b);
SymbolBlock parse_symbols(const std::vector<uint8_t>& bytes, size_t* consumed = nullptr);
size_t serialized_symbols_size(unsigned width, size_t count);

// GF(2^w) arithmetic via log/antilog tables built from a fixed primitive
// polynomial per width (pinned for bit-exactness).
class GaloisField {
public:
    static const GaloisField& get(unsigned width);

    unsigned width() const { return width_; }
    uint32_t order() const { return order_; }  // 2^w - 1

    uint16_t add(uint16_t a, uint16_t b) const { return a ^ b; }
    uint16_t mul(uint16_t a, uint16_t b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    uint16_t div(uint16_t a, uint16_t b) const;
    uint16_t pow_alpha(uint32_t e) const { return exp_[e % order_]; }
    uint16_t inv(uint16_t a) const;

private:
    explicit GaloisField(unsigned width);

    unsigned width_;
    uint32_t order_;
    std::vector<uint16_t> exp_;
    std::vector<uint16_t> log_;
};

}  // namespace ade
