#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <vector>

#include "ade/core.hpp"
#include "ade/expcode.hpp"

using namespace ade;

namespace {

std::vector<uint32_t> iota_vec(uint32_t n) {
    std::vector<uint32_t> v(n);
    std::iota(v.begin(), v.end(), 0u);
    return v;
}

}  // namespace

TEST_CASE("encode_parities basics") {
    // n=2, m=1, d=1, both vertices into check 0
    BipartiteGraph g{2, 1, 1, {0, 0}};
    CHECK(encode_parities(BitString::from_string("10"), g) == BitString::from_string("1"));
    CHECK(encode_parities(BitString::from_string("11"), g) == BitString::from_string("0"));
    CHECK(encode_parities(BitString(2), g) == BitString(1));
    CHECK_THROWS(encode_parities(BitString(3), g));
}

TEST_CASE("encode_parities is linear and duplicate edges cancel") {
    RngStream rng(5);
    auto g = random_bipartite(64, 40, 5, 1234);
    for (int trial = 0; trial < 100; ++trial) {
        BitString a = BitString::random(64, rng), b = BitString::random(64, rng);
        CHECK(encode_parities(a ^ b, g) == (encode_parities(a, g) ^ encode_parities(b, g)));
    }
    // duplicate edge XOR-cancels
    BipartiteGraph dup{1, 2, 2, {0, 0}};
    CHECK(encode_parities(BitString::from_string("1"), dup) == BitString(2));
}

TEST_CASE("bp_decode_restricted trivial cases") {
    auto g = random_bipartite(32, 64, 6, 99);
    RngStream rng(7);
    BitString x = BitString::random(32, rng);
    BitString z = encode_parities(x, g);
    auto all = iota_vec(32);

    auto clean = bp_decode_restricted(x, z, g, all);
    CHECK(clean.fixpoint);
    CHECK(clean.flips == 0);
    CHECK(clean.result == x);

    // single error with all-distinct neighbours: corrected in one flip
    BipartiteGraph ideal{4, 12, 3, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}};
    BitString src(4);
    BitString zz = encode_parities(src, ideal);
    BitString y = src;
    y.flip(2);
    auto out = bp_decode_restricted(y, zz, ideal, iota_vec(4));
    CHECK(out.fixpoint);
    CHECK(out.flips == 1);
    CHECK(out.result == src);
}

TEST_CASE("bp_decode_restricted recovers k errors on a verified expander") {
    RngStream seeds(11);
    int recovered = 0, attempts = 0;
    for (int trial = 0; trial < 40; ++trial) {
        auto g = random_bipartite(16, 256, 8, seeds.next_u64());
        auto S = iota_vec(16);
        if (!verify_expansion_exact(g, S, 1, 4, 0.75 * 8)) continue;
        RngStream rng(seeds.next_u64());
        BitString x = BitString::random(16, rng);
        BitString z = encode_parities(x, g);
        ErrorPattern p;
        p.flips = {static_cast<uint32_t>(rng.next_below(8)),
                   static_cast<uint32_t>(8 + rng.next_below(8))};
        BitString y = apply_errors(x, p);
        auto out = bp_decode_restricted(y, z, g, S);
        ++attempts;
        if (out.fixpoint && out.result == x) ++recovered;
    }
    CHECK(attempts > 10);
    CHECK(recovered == attempts);
}

TEST_CASE("bp_decode_restricted never touches bits outside allowed") {
    RngStream seeds(13);
    for (int trial = 0; trial < 50; ++trial) {
        auto g = random_bipartite(48, 80, 6, seeds.next_u64());
        RngStream rng(seeds.next_u64());
        BitString x = BitString::random(48, rng);
        BitString z = encode_parities(x, g);
        std::vector<uint32_t> allowed;
        for (uint32_t v = 0; v < 48; ++v)
            if (rng.next_below(2)) allowed.push_back(v);
        BitString y = x;
        for (int e = 0; e < 6; ++e) y.flip(static_cast<uint32_t>(rng.next_below(48)));
        auto out = bp_decode_restricted(y, z, g, allowed);
        std::vector<uint8_t> in_allowed(48, 0);
        for (uint32_t v : allowed) in_allowed[v] = 1;
        for (uint32_t v = 0; v < 48; ++v)
            if (!in_allowed[v]) CHECK(out.result.get(v) == y.get(v));
    }
}

TEST_CASE("every flip strictly decreases the unsatisfied count") {
    RngStream seeds(17);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = random_bipartite(40, 120, 8, seeds.next_u64());
        RngStream rng(seeds.next_u64());
        BitString x = BitString::random(40, rng);
        BitString z = encode_parities(x, g);
        BitString y = x;
        for (int e = 0; e < 4; ++e) y.flip(static_cast<uint32_t>(rng.next_below(40)));

        ParityState state(g, z, y, iota_vec(40));
        size_t prev = state.total_unsatisfied();
        size_t flips = 0;
        while (!state.candidates().empty()) {
            uint32_t v = *state.candidates().begin();
            state.flip(v);
            ++flips;
            CHECK(state.total_unsatisfied() < prev);
            prev = state.total_unsatisfied();
            REQUIRE(flips <= 1000);
        }
        CHECK(state.counters_consistent());
    }
}

TEST_CASE("unsatisfied_profile") {
    BipartiteGraph ideal{4, 12, 3, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}};
    BitString x(4);
    BitString z = encode_parities(x, ideal);
    {
        ParityState s(ideal, z, x, iota_vec(4));
        CHECK(s.unsatisfied_profile() == std::pair<size_t, size_t>{0, 0});
    }
    BitString y = x;
    y.flip(1);
    ParityState s(ideal, z, y, iota_vec(4));
    CHECK(s.unsatisfied_profile() == std::pair<size_t, size_t>{3, 3});

    // random state vs naive recount
    RngStream rng(23);
    auto g = random_bipartite(30, 50, 4, 77);
    BitString xs = BitString::random(30, rng);
    BitString zs = encode_parities(BitString::random(30, rng), g);
    ParityState st(g, zs, xs, iota_vec(30));
    auto [total, mx] = st.unsatisfied_profile();
    BitString par = encode_parities(xs, g);
    size_t naive_total = hamming_distance(par, zs);
    CHECK(total == naive_total);
    size_t naive_max = 0;
    for (uint32_t v = 0; v < 30; ++v) {
        size_t c = 0;
        for (uint32_t ch : g.row(v))
            if (par.get(ch) != zs.get(ch)) ++c;
        naive_max = std::max(naive_max, c);
    }
    CHECK(mx == naive_max);
}

TEST_CASE("bp_decode_budgeted zero errors and t=1 equivalence") {
    RngStream seeds(29);
    auto g = random_bipartite(32, 96, 6, seeds.next_u64());
    RngStream rng(seeds.next_u64());
    BitString x = BitString::random(32, rng);
    BitString z = encode_parities(x, g);
    auto all = iota_vec(32);

    auto out = bp_decode_budgeted(x, z, g, {all}, {32});
    CHECK(out.result == x);
    CHECK(out.flips == 0);

    // t=1 with budget >= n: the restriction set is always the whole subset,
    // so outputs match bp_decode_restricted
    for (int trial = 0; trial < 40; ++trial) {
        BitString y = apply_errors(x, {{static_cast<uint32_t>(rng.next_below(32)),
                                        static_cast<uint32_t>(rng.next_below(16))}});
        auto a = bp_decode_budgeted(y, z, g, {all}, {32});
        auto b = bp_decode_restricted(y, z, g, all);
        CHECK(a.result == b.result);
        CHECK(a.flips == b.flips);
    }
}

TEST_CASE("bp_decode_budgeted respects the 19k/20k net-flip budget") {
    RngStream seeds(31);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = random_bipartite(64, 100, 5, seeds.next_u64());
        RngStream rng(seeds.next_u64());
        BitString x = BitString::random(64, rng);
        BitString z = encode_parities(x, g);
        std::vector<std::vector<uint32_t>> subsets = {{}, {}};
        for (uint32_t v = 0; v < 64; ++v) subsets[v % 2].push_back(v);
        std::vector<uint64_t> bounds = {1, 1};
        BitString y = x;
        y.flip(3);
        y.flip(10);
        auto out = bp_decode_budgeted(y, z, g, subsets, bounds);
        // net flips per subset vs the decoded output
        for (size_t i = 0; i < 2; ++i) {
            size_t net = 0;
            for (uint32_t v : subsets[i])
                if (out.result.get(v) != y.get(v)) ++net;
            CHECK(net <= 20 * bounds[i]);
        }
    }
}
