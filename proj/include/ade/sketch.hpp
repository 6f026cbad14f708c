#pragma once

#include <cstdint>
#include <vector>

#include "ade/bitstring.hpp"

namespace ade {

// Wire format (bit-exact):
//   magic "ADE1" (4 bytes), version u16 BE, protocol id u8, n u64 BE,
//   t u16 BE, then per segment: tag u8, iteration u16 BE, bit-length u32 BE,
//   payload ceil(len/8) bytes in the core bit order.
enum class SegmentTag : uint8_t {
    Parity = 1,
    Syndrome = 2,
    Hash = 3,
    HashVec = 4,      // edit protocol: raw first-level hash vector
    LevelSketch = 5,  // edit protocol: per-level Hamming sub-sketch
    Final = 6,        // edit protocol: last-level redundancy
};

enum class ProtocolId : uint8_t {
    OneSet = 1,
    General = 2,
    Special = 3,
    Edit = 4,
};

struct Segment {
    SegmentTag tag;
    uint16_t iteration = 0;
    uint64_t bit_length = 0;
    std::vector<uint8_t> payload;
};

struct Sketch {
    uint16_t version = 1;
    ProtocolId protocol;
    uint64_t n = 0;
    uint16_t t = 1;
    std::vector<Segment> segments;

    void add_bits(SegmentTag tag, uint16_t iteration, const BitString& bits);
    void add_bytes(SegmentTag tag, uint16_t iteration, std::vector<uint8_t> bytes,
                   uint64_t bit_length);
    const Segment& find(SegmentTag tag, uint16_t iteration) const;
    BitString segment_bits(const Segment& s) const;

    // Communication content: sum of segment bit lengths.
    uint64_t payload_bits() const;
    // Full wire size in bits (header and segment headers included); equals
    // the sum of byte-padded segment lengths plus the fixed framing.
    uint64_t size_bits() const;

    std::vector<uint8_t> serialize() const;
    static Sketch parse(const std::vector<uint8_t>& bytes);
};

constexpr size_t kSketchHeaderBytes = 4 + 2 + 1 + 8 + 2;
constexpr size_t kSegmentHeaderBytes = 1 + 2 + 4;

}  // namespace ade
