#include "ade/bitstring.hpp"

#include <bit>
#include <stdexcept>

namespace ade {

BitString BitString::random(size_t len, RngStream& rng) {
    BitString out(len);
    for (auto& w : out.words_) w = rng.next_u64();
    if (len & 63) out.words_.back() &= (uint64_t{1} << (len & 63)) - 1;
    return out;
}

BitString BitString::from_bytes(const std::vector<uint8_t>& bytes, size_t len) {
    if (bytes.size() * 8 < len)
        throw std::invalid_argument("BitString::from_bytes: too few bytes");
    BitString out(len);
    for (size_t i = 0; i < len; ++i)
        if ((bytes[i >> 3] >> (i & 7)) & 1) out.set(i, true);
    return out;
}

BitString BitString::from_string(const std::string& s) {
    BitString out(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1')
            throw std::invalid_argument("BitString::from_string: not a 0/1 string");
        out.set(i, s[i] == '1');
    }
    return out;
}

size_t BitString::popcount() const {
    size_t n = 0;
    for (uint64_t w : words_) n += static_cast<size_t>(std::popcount(w));
    return n;
}

BitString& BitString::operator^=(const BitString& other) {
    if (len_ != other.len_)
        throw std::invalid_argument("BitString xor: length mismatch");
    for (size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

BitString BitString::slice_padded(size_t start, size_t count) const {
    BitString out(count);
    size_t avail = start < len_ ? len_ - start : 0;
    size_t take = avail < count ? avail : count;
    for (size_t i = 0; i < take; ++i)
        if (get(start + i)) out.set(i, true);
    return out;
}

void BitString::write_slice(size_t start, const BitString& bits, size_t count) {
    size_t avail = start < len_ ? len_ - start : 0;
    size_t put = avail < count ? avail : count;
    for (size_t i = 0; i < put; ++i) set(start + i, bits.get(i));
}

std::vector<uint8_t> BitString::to_bytes() const {
    std::vector<uint8_t> out((len_ + 7) / 8, 0);
    for (size_t i = 0; i < out.size(); ++i) {
        size_t word = i >> 3;
        out[i] = static_cast<uint8_t>(words_[word] >> ((i & 7) * 8));
    }
    return out;
}

std::string BitString::to_string() const {
    std::string s(len_, '0');
    for (size_t i = 0; i < len_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

size_t hamming_distance(const BitString& x, const BitString& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("hamming_distance: length mismatch");
    size_t n = 0;
    for (size_t i = 0; i < x.words().size(); ++i)
        n += static_cast<size_t>(std::popcount(x.words()[i] ^ y.words()[i]));
    return n;
}

}  // namespace ade
