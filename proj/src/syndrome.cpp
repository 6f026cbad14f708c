#include "ade/syndrome.hpp"

#include <array>
#include <mutex>
#include <stdexcept>

namespace ade {

namespace {

// Primitive polynomials per width, index 4..16.
constexpr std::array<uint32_t, 17> kPrimitivePoly = {
    0, 0, 0, 0,
    0x13,    // x^4 + x + 1
    0x25,    // x^5 + x^2 + 1
    0x43,    // x^6 + x + 1
    0x89,    // x^7 + x^3 + 1
    0x11d,   // x^8 + x^4 + x^3 + x^2 + 1
    0x211,   // x^9 + x^4 + 1
    0x409,   // x^10 + x^3 + 1
    0x805,   // x^11 + x^2 + 1
    0x1053,  // x^12 + x^6 + x^4 + x + 1
    0x201b,  // x^13 + x^4 + x^3 + x + 1
    0x4443,  // x^14 + x^10 + x^6 + x + 1
    0x8003,  // x^15 + x + 1
    0x1100b  // x^16 + x^12 + x^3 + x + 1
};

}  // namespace

GaloisField::GaloisField(unsigned width) : width_(width) {
    order_ = (uint32_t{1} << width) - 1;
    exp_.resize(2 * order_);
    log_.assign(order_ + 1, 0);
    uint32_t poly = kPrimitivePoly[width];
    uint32_t x = 1;
    for (uint32_t i = 0; i < order_; ++i) {
        exp_[i] = static_cast<uint16_t>(x);
        log_[x] = static_cast<uint16_t>(i);
        x <<= 1;
        if (x >> width) x ^= poly;
    }
    for (uint32_t i = order_; i < 2 * order_; ++i) exp_[i] = exp_[i - order_];
}

const GaloisField& GaloisField::get(unsigned width) {
    if (width < 4 || width > 16)
        throw std::invalid_argument("GaloisField: width must be in [4,16]");
    static std::array<const GaloisField*, 17> cache = {};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    if (!cache[width]) cache[width] = new GaloisField(width);
    return *cache[width];
}

uint16_t GaloisField::div(uint16_t a, uint16_t b) const {
    if (b == 0) throw std::domain_error("GaloisField: division by zero");
    if (a == 0) return 0;
    return exp_[log_[a] + order_ - log_[b]];
}

uint16_t GaloisField::inv(uint16_t a) const {
    if (a == 0) throw std::domain_error("GaloisField: zero has no inverse");
    return exp_[order_ - log_[a]];
}

SymbolBlock bits_to_symbols(const BitString& x, unsigned w) {
    if (w < 4 || w > 16) throw std::invalid_argument("bits_to_symbols: bad width");
    SymbolBlock out;
    out.width = w;
    size_t count = (x.size() + w - 1) / w;
    out.symbols.resize(count, 0);
    for (size_t i = 0; i < x.size(); ++i)
        if (x.get(i)) out.symbols[i / w] |= static_cast<uint16_t>(1u << (i % w));
    return out;
}

BitString symbols_to_bits(const SymbolBlock& b, size_t len) {
    if (b.symbols.size() * b.width < len)
        throw std::invalid_argument("symbols_to_bits: too few symbols");
    BitString out(len);
    for (size_t i = 0; i < len; ++i)
        if ((b.symbols[i / b.width] >> (i % b.width)) & 1) out.set(i, true);
    return out;
}

namespace {

// Generator polynomial for 2e parity symbols: prod_{i=1..2e} (X - alpha^i),
// coefficients ascending (g[0] = constant term), g[2e] = 1.
std::vector<uint16_t> rs_generator(const GaloisField& gf, size_t e) {
    std::vector<uint16_t> g = {1};
    for (size_t i = 1; i <= 2 * e; ++i) {
        uint16_t root = gf.pow_alpha(static_cast<uint32_t>(i));
        std::vector<uint16_t> next(g.size() + 1, 0);
        for (size_t j = 0; j < g.size(); ++j) {
            next[j + 1] ^= g[j];                // X * g
            next[j] ^= gf.mul(g[j], root);      // root * g
        }
        g = std::move(next);
    }
    return g;
}

void check_capacity(const GaloisField& gf, size_t data_len, size_t e) {
    if (data_len + 2 * e > gf.order())
        throw std::invalid_argument("reed-solomon: length bound |data| + 2e <= 2^w - 1 violated");
}

}  // namespace

SymbolBlock rs_syndrome(const SymbolBlock& data, size_t e) {
    const GaloisField& gf = GaloisField::get(data.width);
    check_capacity(gf, data.symbols.size(), e);
    SymbolBlock out;
    out.width = data.width;
    if (e == 0) return out;

    // Polynomial division: parity = data(X) * X^{2e} mod g(X). Data symbol 0
    // carries the highest power.
    std::vector<uint16_t> g = rs_generator(gf, e);
    std::vector<uint16_t> rem(2 * e, 0);
    for (uint16_t d : data.symbols) {
        uint16_t factor = d ^ rem[0];
        for (size_t j = 0; j + 1 < rem.size(); ++j)
            rem[j] = rem[j + 1] ^ gf.mul(factor, g[rem.size() - 1 - j]);
        rem.back() = gf.mul(factor, g[0]);
    }
    out.symbols = std::move(rem);
    return out;
}

std::optional<SymbolBlock> rs_correct(const SymbolBlock& corrupted,
                                      const SymbolBlock& redundancy, size_t e) {
    if (corrupted.width != redundancy.width && e > 0)
        throw std::invalid_argument("rs_correct: width mismatch");
    if (redundancy.symbols.size() != 2 * e)
        throw std::invalid_argument("rs_correct: redundancy must hold 2e symbols");
    if (e == 0) return corrupted;

    const GaloisField& gf = GaloisField::get(corrupted.width);
    check_capacity(gf, corrupted.symbols.size(), e);

    std::vector<uint16_t> cw = corrupted.symbols;
    cw.insert(cw.end(), redundancy.symbols.begin(), redundancy.symbols.end());
    size_t n = cw.size();

    // Syndromes S_j = c(alpha^j), j = 1..2e, with cw[i] the coefficient of
    // X^{n-1-i}.
    std::vector<uint16_t> synd(2 * e, 0);
    bool clean = true;
    for (size_t j = 0; j < 2 * e; ++j) {
        uint16_t alpha_j = gf.pow_alpha(static_cast<uint32_t>(j + 1));
        uint16_t acc = 0;
        for (size_t i = 0; i < n; ++i) acc = gf.add(gf.mul(acc, alpha_j), cw[i]);
        synd[j] = acc;
        clean = clean && acc == 0;
    }
    if (clean) return corrupted;

    // Berlekamp-Massey for the error locator Lambda (ascending coefficients).
    std::vector<uint16_t> lambda = {1}, prev = {1};
    size_t L = 0, m = 1;
    uint16_t b = 1;
    for (size_t step = 0; step < 2 * e; ++step) {
        uint16_t delta = synd[step];
        for (size_t i = 1; i <= L && i < lambda.size(); ++i)
            delta ^= gf.mul(lambda[i], synd[step - i]);
        if (delta == 0) {
            ++m;
        } else if (2 * L <= step) {
            std::vector<uint16_t> keep = lambda;
            uint16_t coef = gf.div(delta, b);
            if (lambda.size() < prev.size() + m) lambda.resize(prev.size() + m, 0);
            for (size_t i = 0; i < prev.size(); ++i)
                lambda[i + m] ^= gf.mul(coef, prev[i]);
            L = step + 1 - L;
            prev = std::move(keep);
            b = delta;
            m = 1;
        } else {
            uint16_t coef = gf.div(delta, b);
            if (lambda.size() < prev.size() + m) lambda.resize(prev.size() + m, 0);
            for (size_t i = 0; i < prev.size(); ++i)
                lambda[i + m] ^= gf.mul(coef, prev[i]);
            ++m;
        }
    }
    if (L > e) return std::nullopt;

    // Omega = S(x) * Lambda(x) mod x^{2e}.
    std::vector<uint16_t> omega(2 * e, 0);
    for (size_t i = 0; i < 2 * e; ++i)
        for (size_t j = 0; j < lambda.size() && i + j < 2 * e; ++j)
            omega[i + j] ^= gf.mul(synd[i], lambda[j]);

    auto eval = [&](const std::vector<uint16_t>& p, uint16_t x) {
        uint16_t acc = 0;
        for (size_t i = p.size(); i-- > 0;) acc = gf.add(gf.mul(acc, x), p[i]);
        return acc;
    };

    // Chien search over codeword positions; position i has locator
    // X_i = alpha^{n-1-i}.
    std::vector<uint16_t> fixed = cw;
    size_t roots = 0;
    for (size_t i = 0; i < n; ++i) {
        uint16_t loc = gf.pow_alpha(static_cast<uint32_t>(n - 1 - i));
        uint16_t loc_inv = gf.inv(loc);
        if (eval(lambda, loc_inv) != 0) continue;
        ++roots;
        // Forney: magnitude = Omega(X^{-1}) / Lambda'(X^{-1}), with
        // Lambda'(x) = sum over odd j of lambda_j x^{j-1} in characteristic 2.
        uint16_t num = eval(omega, loc_inv);
        uint16_t den = 0;
        uint16_t xp = 1;
        uint16_t x2 = gf.mul(loc_inv, loc_inv);
        for (size_t j = 1; j < lambda.size(); j += 2) {
            den ^= gf.mul(lambda[j], xp);
            xp = gf.mul(xp, x2);
        }
        if (den == 0) return std::nullopt;
        uint16_t mag = gf.div(num, den);
        if (mag == 0) return std::nullopt;
        fixed[i] ^= mag;
    }
    if (roots != L) return std::nullopt;

    // Re-verify: all syndromes of the corrected word must vanish.
    for (size_t j = 0; j < 2 * e; ++j) {
        uint16_t alpha_j = gf.pow_alpha(static_cast<uint32_t>(j + 1));
        uint16_t acc = 0;
        for (size_t i = 0; i < n; ++i) acc = gf.add(gf.mul(acc, alpha_j), fixed[i]);
        if (acc != 0) return std::nullopt;
    }

    SymbolBlock out;
    out.width = corrupted.width;
    out.symbols.assign(fixed.begin(), fixed.begin() + corrupted.symbols.size());
    return out;
}

unsigned rs_pick_width(size_t bits, size_t e) {
    for (unsigned w = 4; w <= 16; ++w) {
        size_t count = (bits + w - 1) / w;
        if (count + 2 * e <= (size_t{1} << w) - 1) return w;
    }
    throw std::invalid_argument("rs_pick_width: no width in [4,16] fits");
}

size_t serialized_symbols_size(unsigned width, size_t count) {
    return 1 + 4 + (count * width + 7) / 8;
}

std::vector<uint8_t> serialize_symbols(const SymbolBlock& b) {
    std::vector<uint8_t> out;
    out.reserve(serialized_symbols_size(b.width, b.symbols.size()));
    out.push_back(static_cast<uint8_t>(b.width));
    uint32_t count = static_cast<uint32_t>(b.symbols.size());
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<uint8_t>(count >> s));
    size_t nbits = b.symbols.size() * b.width;
    out.resize(out.size() + (nbits + 7) / 8, 0);
    uint8_t* bits = out.data() + 5;
    for (size_t i = 0; i < nbits; ++i)
        if ((b.symbols[i / b.width] >> (i % b.width)) & 1) bits[i >> 3] |= 1u << (i & 7);
    return out;
}

SymbolBlock parse_symbols(const std::vector<uint8_t>& bytes, size_t* consumed) {
    if (bytes.size() < 5) throw std::runtime_error("parse_symbols: truncated header");
    SymbolBlock b;
    b.width = bytes[0];
    if (b.width < 4 || b.width > 16) throw std::runtime_error("parse_symbols: bad width");
    uint32_t count = 0;
    for (int i = 1; i <= 4; ++i) count = (count << 8) | bytes[i];
    size_t nbits = static_cast<size_t>(count) * b.width;
    size_t need = 5 + (nbits + 7) / 8;
    if (bytes.size() < need) throw std::runtime_error("parse_symbols: truncated payload");
    b.symbols.assign(count, 0);
    const uint8_t* bits = bytes.data() + 5;
    for (size_t i = 0; i < nbits; ++i)
        if ((bits[i >> 3] >> (i & 7)) & 1)
            b.symbols[i / b.width] |= static_cast<uint16_t>(1u << (i % b.width));
    if (consumed) *consumed = need;
    return b;
}

}  // namespace ade
