#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "ade/rng.hpp"
#include "ade/syndrome.hpp"

using namespace ade;

namespace {

// Textbook reference encoder: polynomial long division of data(X)*X^{2e} by
// the generator, written as plainly as possible.
std::vector<uint16_t> reference_parity(const GaloisField& gf,
                                       const std::vector<uint16_t>& data, size_t e) {
    std::vector<uint16_t> gen = {1};
    for (size_t i = 1; i <= 2 * e; ++i) {
        std::vector<uint16_t> next(gen.size() + 1, 0);
        uint16_t root = gf.pow_alpha(static_cast<uint32_t>(i));
        for (size_t j = 0; j < gen.size(); ++j) {
            next[j] ^= gf.mul(gen[j], root);
            next[j + 1] ^= gen[j];
        }
        gen = std::move(next);
    }
    // gen is ascending; express the dividend descending and divide.
    std::vector<uint16_t> work(data.begin(), data.end());
    work.resize(data.size() + 2 * e, 0);
    for (size_t i = 0; i < data.size(); ++i) {
        uint16_t lead = work[i];
        if (lead == 0) continue;
        for (size_t j = 0; j <= 2 * e; ++j)
            work[i + j] ^= gf.mul(lead, gen[2 * e - j]);
    }
    return {work.end() - 2 * e, work.end()};
}

SymbolBlock mk(unsigned w, std::vector<uint16_t> syms) { return {w, std::move(syms)}; }

// Brute-force nearest-codeword search for tiny parameters: enumerates all
// messages, returns the unique message whose codeword is within e of the
// received word, if any.
std::optional<std::vector<uint16_t>> nearest_codeword(const GaloisField& gf,
                                                      const std::vector<uint16_t>& received,
                                                      size_t data_len, size_t e) {
    size_t q = gf.order() + 1;
    std::vector<uint16_t> msg(data_len, 0);
    std::optional<std::vector<uint16_t>> best;
    size_t best_dist = SIZE_MAX;
    while (true) {
        SymbolBlock data = {gf.width(), msg};
        SymbolBlock par = rs_syndrome(data, e);
        size_t dist = 0;
        for (size_t i = 0; i < data_len; ++i)
            if (msg[i] != received[i]) ++dist;
        for (size_t i = 0; i < 2 * e; ++i)
            if (par.symbols[i] != received[data_len + i]) ++dist;
        if (dist < best_dist) {
            best_dist = dist;
            best = msg;
        }
        size_t i = 0;
        while (i < data_len && msg[i] == q - 1) msg[i++] = 0;
        if (i == data_len) break;
        ++msg[i];
    }
    if (best_dist <= e) return best;
    return std::nullopt;
}

}  // namespace

TEST_CASE("symbol/bit round trips") {
    RngStream rng(3);
    for (size_t len : {0, 1, 9, 64, 121}) {
        BitString x = BitString::random(len, rng);
        for (unsigned w : {4u, 8u, 13u}) {
            auto sb = bits_to_symbols(x, w);
            CHECK(sb.symbols.size() == (len + w - 1) / w);
            CHECK(symbols_to_bits(sb, len) == x);
        }
    }
    // 9 bits at w=8: second symbol holds one data bit
    BitString nine = BitString::from_string("111111111");
    auto sb = bits_to_symbols(nine, 8);
    REQUIRE(sb.symbols.size() == 2);
    CHECK(sb.symbols[1] == 1);
    // a single bit error corrupts at most one symbol
    BitString flipped = nine;
    flipped.flip(4);
    auto sb2 = bits_to_symbols(flipped, 8);
    CHECK(sb2.symbols[1] == sb.symbols[1]);
    CHECK(sb2.symbols[0] != sb.symbols[0]);
}

TEST_CASE("rs_syndrome matches the polynomial-division oracle") {
    RngStream rng(5);
    CHECK(rs_syndrome(mk(8, {1, 2, 3}), 0).symbols.empty());
    CHECK(rs_syndrome(mk(8, {0, 0, 0, 0}), 2).symbols == std::vector<uint16_t>(4, 0));

    const GaloisField& gf8 = GaloisField::get(8);
    auto two = rs_syndrome(mk(8, {1, 2, 3}), 1);
    CHECK(two.symbols.size() == 2);
    CHECK(two.symbols == reference_parity(gf8, {1, 2, 3}, 1));

    for (int trial = 0; trial < 200; ++trial) {
        unsigned w = 4 + rng.next_below(5);
        const GaloisField& gf = GaloisField::get(w);
        size_t e = rng.next_below(4);
        size_t len = 1 + rng.next_below(gf.order() - 2 * e - 1);
        std::vector<uint16_t> data(len);
        for (auto& s : data) s = static_cast<uint16_t>(rng.next_below(gf.order() + 1));
        CHECK(rs_syndrome(mk(w, data), e).symbols == reference_parity(gf, data, e));
    }
    CHECK_THROWS(rs_syndrome(mk(4, std::vector<uint16_t>(14, 0)), 1));
}

TEST_CASE("rs_correct exact recovery up to e errors") {
    RngStream rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        unsigned w = 4 + rng.next_below(6);
        const GaloisField& gf = GaloisField::get(w);
        size_t e = 1 + rng.next_below(3);
        size_t len = 1 + rng.next_below(std::min<size_t>(gf.order() - 2 * e - 1, 40));
        std::vector<uint16_t> data(len);
        for (auto& s : data) s = static_cast<uint16_t>(rng.next_below(gf.order() + 1));
        SymbolBlock block = mk(w, data);
        SymbolBlock par = rs_syndrome(block, e);

        SymbolBlock corrupted = block;
        size_t ne = rng.next_below(e + 1);
        for (size_t i = 0; i < ne && i < len; ++i) {
            size_t pos = rng.next_below(len);
            corrupted.symbols[pos] ^= static_cast<uint16_t>(1 + rng.next_below(gf.order()));
        }
        auto out = rs_correct(corrupted, par, e);
        REQUIRE(out.has_value());
        CHECK(out->symbols == data);
    }
}

TEST_CASE("rs_correct zero errors and e=0 identity") {
    auto data = mk(8, {9, 8, 7});
    CHECK(rs_correct(data, mk(8, {}), 0)->symbols == data.symbols);
    auto par = rs_syndrome(data, 2);
    CHECK(rs_correct(data, par, 2)->symbols == data.symbols);
}

TEST_CASE("rs_correct vs brute-force nearest codeword, w=4") {
    RngStream rng(11);
    const GaloisField& gf = GaloisField::get(4);
    for (size_t data_len : {1, 2, 3}) {
        for (size_t e : {1, 2}) {
            if (data_len + 2 * e > gf.order()) continue;
            for (int trial = 0; trial < 60; ++trial) {
                std::vector<uint16_t> data(data_len);
                for (auto& s : data) s = static_cast<uint16_t>(rng.next_below(16));
                auto par = rs_syndrome(mk(4, data), e);
                std::vector<uint16_t> received = data;
                received.insert(received.end(), par.symbols.begin(), par.symbols.end());
                size_t ne = rng.next_below(e + 2);  // sometimes e+1 errors
                for (size_t i = 0; i < ne; ++i)
                    received[rng.next_below(received.size())] ^=
                        static_cast<uint16_t>(1 + rng.next_below(15));

                auto oracle = nearest_codeword(gf, received, data_len, e);
                SymbolBlock corr = mk(4, std::vector<uint16_t>(received.begin(),
                                                               received.begin() + data_len));
                SymbolBlock red = mk(4, std::vector<uint16_t>(received.begin() + data_len,
                                                              received.end()));
                auto got = rs_correct(corr, red, e);
                if (oracle.has_value()) {
                    // within decoding radius: decoder must agree
                    REQUIRE(got.has_value());
                    CHECK(got->symbols == *oracle);
                }
                // beyond the radius the decoder may fail or miscorrect; the
                // harness flags miscorrection by comparing to ground truth
            }
        }
    }
}

TEST_CASE("e+1 errors are failure or wrong output, never silent truth") {
    RngStream rng(13);
    int flagged = 0, total = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<uint16_t> data(8);
        for (auto& s : data) s = static_cast<uint16_t>(rng.next_below(256));
        size_t e = 2;
        auto par = rs_syndrome(mk(8, data), e);
        SymbolBlock corrupted = mk(8, data);
        // e+1 distinct positions
        std::vector<size_t> pos = {0, 3, 6};
        for (size_t p : pos)
            corrupted.symbols[p] ^= static_cast<uint16_t>(1 + rng.next_below(255));
        auto got = rs_correct(corrupted, par, e);
        ++total;
        if (!got.has_value() || got->symbols != data) ++flagged;
    }
    CHECK(flagged == total);
}

TEST_CASE("rs_pick_width and serialization") {
    CHECK(rs_pick_width(8, 1) == 4);        // 2 symbols + 2 <= 15
    CHECK(rs_pick_width(4096, 64) == 10);   // 410 + 128 <= 1023
    CHECK_THROWS(rs_pick_width(size_t{1} << 24, 0));

    RngStream rng(17);
    SymbolBlock b = mk(13, {});
    for (int i = 0; i < 50; ++i)
        b.symbols.push_back(static_cast<uint16_t>(rng.next_below(1 << 13)));
    auto bytes = serialize_symbols(b);
    CHECK(bytes.size() == serialized_symbols_size(13, 50));
    size_t consumed = 0;
    auto back = parse_symbols(bytes, &consumed);
    CHECK(consumed == bytes.size());
    CHECK(back == b);
}
