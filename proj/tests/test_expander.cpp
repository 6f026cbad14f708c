#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "ade/expander.hpp"

using namespace ade;

namespace {

// Independent oracle: enumerate subsets R of S by index vector, constrained
// by per-subset caps, and check distinct neighbourhoods directly.
bool expansion_oracle(const BipartiteGraph& g,
                      const std::vector<std::vector<uint32_t>>& subsets,
                      const std::vector<uint64_t>& caps, size_t r_lo, size_t r_hi,
                      double alpha) {
    std::vector<uint32_t> members, owner;
    for (size_t i = 0; i < subsets.size(); ++i)
        for (uint32_t v : subsets[i]) {
            members.push_back(v);
            owner.push_back(static_cast<uint32_t>(i));
        }
    size_t n = members.size();
    r_hi = std::min(r_hi, n);
    std::vector<size_t> pick;
    // Iterative combination enumeration per target size r.
    for (size_t r = r_lo; r <= r_hi; ++r) {
        if (r == 0) continue;
        std::vector<size_t> idx(r);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            std::vector<uint64_t> used(subsets.size(), 0);
            bool cap_ok = true;
            std::set<uint32_t> nb;
            for (size_t i : idx) {
                if (++used[owner[i]] > caps[owner[i]]) cap_ok = false;
                for (uint32_t c : g.row(members[i])) nb.insert(c);
            }
            if (cap_ok && static_cast<double>(nb.size()) <= alpha * static_cast<double>(r))
                return false;
            // next combination
            size_t j = r;
            while (j-- > 0) {
                if (idx[j] != j + n - r) {
                    ++idx[j];
                    for (size_t l = j + 1; l < r; ++l) idx[l] = idx[l - 1] + 1;
                    break;
                }
                if (j == 0) goto next_r;
            }
        }
    next_r:;
    }
    return true;
}

// Hybrid expansion check for ranges beyond the exact budget: exhaustive for
// small r, random subsets for larger r.
bool expansion_spot_check(const BipartiteGraph& g, const std::vector<uint32_t>& S,
                          size_t r_hi, double alpha, RngStream& rng) {
    size_t exact_hi = std::min<size_t>(r_hi, 3);
    if (!verify_expansion_exact(g, S, 1, exact_hi, alpha)) return false;
    std::vector<uint32_t> pool = S;
    for (size_t r = exact_hi + 1; r <= r_hi; ++r) {
        for (int sample = 0; sample < 2000; ++sample) {
            std::set<uint32_t> nb;
            for (size_t i = 0; i < r; ++i) {
                size_t j = i + rng.next_below(pool.size() - i);
                std::swap(pool[i], pool[j]);
                for (uint32_t c : g.row(pool[i])) nb.insert(c);
            }
            if (static_cast<double>(nb.size()) <= alpha * static_cast<double>(r))
                return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("random_bipartite degenerate and deterministic") {
    auto g = random_bipartite(1, 1, 3, 123);
    CHECK(g.edges == std::vector<uint32_t>{0, 0, 0});

    auto a = random_bipartite(50, 16, 4, 42);
    auto b = random_bipartite(50, 16, 4, 42);
    CHECK(a.edges == b.edges);
    auto c = random_bipartite(50, 16, 4, 43);
    CHECK(a.edges != c.edges);
}

TEST_CASE("random_bipartite endpoint histogram is uniform (chi-squared)") {
    auto g = random_bipartite(1000, 16, 1, 20240001);
    std::vector<double> hist(16, 0);
    for (uint32_t e : g.edges) hist[e] += 1;
    double expect = 1000.0 / 16.0;
    double stat = 0;
    for (double h : hist) stat += (h - expect) * (h - expect) / expect;
    // chi-squared with 15 dof: p > 0.01 iff stat < 30.58
    CHECK(stat < 30.58);
}

TEST_CASE("plan_one_set formulas") {
    auto p = plan_one_set(8, 8);
    CHECK(p.d == 4);  // floor clamp: 2*log2(2) = 2 < 4
    CHECK(p.m == 128);

    auto q = plan_one_set(512, 16);
    CHECK(q.d == 12);
    CHECK(q.m == 768);

    auto c = plan_one_set(64, 4, PlanMode::Conservative);
    CHECK(c.d == 10);
    CHECK(c.m == uint64_t(2) * 10 * 4 * 1024);  // 2dk * 2^(1/delta)

    CHECK_THROWS(plan_one_set(4, 8));
}

TEST_CASE("plan_special formulas") {
    auto p = plan_special(1);
    CHECK(p.d == 10);
    CHECK(p.m == 20);
    CHECK(plan_special(64).m == 1280);
    // delta is carried but ignored by the tuned size formula
    CHECK(plan_special(4, 0.25).m == plan_special(4, 0.1).m);
}

TEST_CASE("verify_expansion_exact edge shapes") {
    // Every left vertex maps all edges to check 0: neighbourhood capped at 1.
    BipartiteGraph tiny{4, 1, 3, std::vector<uint32_t>(12, 0)};
    std::vector<uint32_t> all = {0, 1, 2, 3};
    CHECK_FALSE(verify_expansion_exact(tiny, all, 1, 2, 2.0));

    // Disjoint distinct neighbours per vertex: |Gamma(R)| = d|R| exactly.
    BipartiteGraph ideal{4, 12, 3, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}};
    CHECK(verify_expansion_exact(ideal, all, 1, 4, 0.9 * 3));
    CHECK_FALSE(verify_expansion_exact(ideal, all, 1, 4, 3.0));  // strict >
}

TEST_CASE("verify_expansion matches enumeration oracle") {
    RngStream seeds(31);
    for (int trial = 0; trial < 50; ++trial) {
        auto g = random_bipartite(24, 20, 4, seeds.next_u64());
        std::vector<uint32_t> S(24);
        std::iota(S.begin(), S.end(), 0u);
        bool fast = verify_expansion_exact(g, S, 1, 4, 0.75 * 4);
        bool slow = expansion_oracle(g, {S}, {24}, 1, 4, 0.75 * 4);
        CHECK(fast == slow);
    }
}

TEST_CASE("verify_expansion_restricted caps") {
    auto g = random_bipartite(20, 24, 4, 777);
    std::vector<std::vector<uint32_t>> subsets = {{0, 1, 2, 3, 4}, {10, 11, 12, 13}};
    // caps all zero: vacuously true even at alpha that would otherwise fail
    CHECK(verify_expansion_restricted(g, subsets, {0, 0}, 1, 3, 100.0));
    // caps = sizes reduce to the unrestricted check over the union
    std::vector<uint32_t> uni = {0, 1, 2, 3, 4, 10, 11, 12, 13};
    CHECK(verify_expansion_restricted(g, subsets, {5, 4}, 1, 3, 0.8 * 4) ==
          verify_expansion_exact(g, uni, 1, 3, 0.8 * 4));

    RngStream seeds(37);
    for (int trial = 0; trial < 25; ++trial) {
        auto h = random_bipartite(16, 18, 3, seeds.next_u64());
        std::vector<std::vector<uint32_t>> ss = {{0, 1, 2, 3, 4, 5}, {8, 9, 10, 11}};
        std::vector<uint64_t> caps = {2, 2};
        bool fast = verify_expansion_restricted(h, ss, caps, 1, 4, 0.7 * 3);
        bool slow = expansion_oracle(h, ss, caps, 1, 4, 0.7 * 3);
        CHECK(fast == slow);
    }
}

TEST_CASE("monte-carlo expansion failure rate, conservative plan") {
    // Empirical proxy for the random-graph lemma (threshold is a harness
    // constant, not a paper number). The 0.9d guarantee needs the
    // conservative size formula: with tuned m = 4dk a single row already has
    // a duplicate endpoint with constant probability, so no random graph of
    // that size is a 0.9d expander at r = 1. Tuned sizes are validated by the
    // protocol-level acceptance instead.
    RngStream seeds(41);
    const uint64_t n = 256, k = 4;
    auto plan = plan_one_set(64, k, PlanMode::Conservative);
    int failures = 0;
    const int trials = 200;
    for (int trial = 0; trial < trials; ++trial) {
        RngStream rng(seeds.next_u64());
        std::vector<uint32_t> pool(n);
        std::iota(pool.begin(), pool.end(), 0u);
        for (size_t i = 0; i < 64; ++i)
            std::swap(pool[i], pool[i + rng.next_below(n - i)]);
        std::vector<uint32_t> S(pool.begin(), pool.begin() + 64);
        std::sort(S.begin(), S.end());
        auto g = random_bipartite(n, static_cast<uint32_t>(plan.m), plan.d,
                                  seeds.next_u64());
        if (!expansion_spot_check(g, S, 2 * k, 0.9 * plan.d, rng)) ++failures;
    }
    CHECK(failures <= trials / 10);
}

TEST_CASE("graph dump round-trips") {
    auto g = random_bipartite(6, 9, 2, 99);
    std::stringstream ss;
    g.dump(ss);
    auto h = BipartiteGraph::load(ss);
    CHECK(g.edges == h.edges);
    CHECK(g.m_right == h.m_right);
}

TEST_CASE("neighbourhood monotone under inclusion") {
    auto g = random_bipartite(12, 10, 3, 5);
    std::set<uint32_t> small, large;
    for (uint32_t v : {1u, 3u})
        for (uint32_t c : g.row(v)) small.insert(c);
    for (uint32_t v : {1u, 3u, 7u})
        for (uint32_t c : g.row(v)) large.insert(c);
    for (uint32_t c : small) CHECK(large.count(c) == 1);
}
