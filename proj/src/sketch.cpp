#include "ade/sketch.hpp"

#include <cstring>
#include <stdexcept>

namespace ade {

namespace {

void put_be(std::vector<uint8_t>& out, uint64_t v, int bytes) {
    for (int s = (bytes - 1) * 8; s >= 0; s -= 8)
        out.push_back(static_cast<uint8_t>(v >> s));
}

uint64_t get_be(const std::vector<uint8_t>& in, size_t& at, int bytes) {
    if (at + bytes > in.size()) throw std::runtime_error("sketch: truncated");
    uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v = (v << 8) | in[at++];
    return v;
}

}  // namespace

void Sketch::add_bits(SegmentTag tag, uint16_t iteration, const BitString& bits) {
    segments.push_back({tag, iteration, bits.size(), bits.to_bytes()});
}

void Sketch::add_bytes(SegmentTag tag, uint16_t iteration, std::vector<uint8_t> bytes,
                       uint64_t bit_length) {
    if ((bit_length + 7) / 8 != bytes.size())
        throw std::invalid_argument("sketch: payload size mismatch");
    segments.push_back({tag, iteration, bit_length, std::move(bytes)});
}

const Segment& Sketch::find(SegmentTag tag, uint16_t iteration) const {
    for (const auto& s : segments)
        if (s.tag == tag && s.iteration == iteration) return s;
    throw std::runtime_error("sketch: missing segment");
}

BitString Sketch::segment_bits(const Segment& s) const {
    return BitString::from_bytes(s.payload, s.bit_length);
}

uint64_t Sketch::payload_bits() const {
    uint64_t total = 0;
    for (const auto& s : segments) total += s.bit_length;
    return total;
}

uint64_t Sketch::size_bits() const {
    uint64_t bytes = kSketchHeaderBytes;
    for (const auto& s : segments) bytes += kSegmentHeaderBytes + s.payload.size();
    return bytes * 8;
}

std::vector<uint8_t> Sketch::serialize() const {
    std::vector<uint8_t> out;
    out.reserve(size_bits() / 8);
    out.push_back('A');
    out.push_back('D');
    out.push_back('E');
    out.push_back('1');
    put_be(out, version, 2);
    out.push_back(static_cast<uint8_t>(protocol));
    put_be(out, n, 8);
    put_be(out, t, 2);
    for (const auto& s : segments) {
        out.push_back(static_cast<uint8_t>(s.tag));
        put_be(out, s.iteration, 2);
        put_be(out, s.bit_length, 4);
        out.insert(out.end(), s.payload.begin(), s.payload.end());
    }
    return out;
}

Sketch Sketch::parse(const std::vector<uint8_t>& bytes) {
    size_t at = 0;
    if (bytes.size() < kSketchHeaderBytes || std::memcmp(bytes.data(), "ADE1", 4) != 0)
        throw std::runtime_error("sketch: bad magic");
    at = 4;
    Sketch sk;
    sk.version = static_cast<uint16_t>(get_be(bytes, at, 2));
    if (sk.version != 1) throw std::runtime_error("sketch: unsupported version");
    sk.protocol = static_cast<ProtocolId>(get_be(bytes, at, 1));
    sk.n = get_be(bytes, at, 8);
    sk.t = static_cast<uint16_t>(get_be(bytes, at, 2));
    while (at < bytes.size()) {
        Segment s;
        s.tag = static_cast<SegmentTag>(get_be(bytes, at, 1));
        s.iteration = static_cast<uint16_t>(get_be(bytes, at, 2));
        s.bit_length = get_be(bytes, at, 4);
        size_t nbytes = (s.bit_length + 7) / 8;
        if (at + nbytes > bytes.size()) throw std::runtime_error("sketch: truncated payload");
        s.payload.assign(bytes.begin() + at, bytes.begin() + at + nbytes);
        at += nbytes;
        sk.segments.push_back(std::move(s));
    }
    return sk;
}

}  // namespace ade
