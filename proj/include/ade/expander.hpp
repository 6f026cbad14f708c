#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ade/rng.hpp"

namespace ade {

// Left-regular bipartite multigraph Gamma: [n] x [d] -> [m]. Duplicate
// endpoints are permitted; edge order within a row is the sampling order.
// Generation is a pure function of (n, m, d, seed).
struct BipartiteGraph {
    uint32_t n_left = 0;
    uint32_t m_right = 0;
    uint32_t d = 0;
    std::vector<uint32_t> edges;  // n_left * d, row-major

    std::span<const uint32_t> row(uint32_t v) const {
        return {edges.data() + static_cast<size_t>(v) * d, d};
    }

    // Reverse adjacency with multiplicity: for each check, the incident left
    // vertices, one entry per edge.
    std::vector<std::vector<uint32_t>> reverse_adjacency() const;

    // Text dump: header "n m d", then one line per left vertex.
    void dump(std::ostream& os) const;
    static BipartiteGraph load(std::istream& is);
};

BipartiteGraph random_bipartite(uint32_t n, uint32_t m, uint32_t d, RngStream& rng);

inline BipartiteGraph random_bipartite(uint32_t n, uint32_t m, uint32_t d, uint64_t seed) {
    RngStream rng(seed);
    return random_bipartite(n, m, d, rng);
}

enum class PlanMode { Tuned, Conservative };

struct ExpanderPlan {
    uint32_t d = 0;
    uint64_t m = 0;
    double delta = 0.1;
    PlanMode mode = PlanMode::Tuned;
};

// Tuned constants for the size formulas; defaults pinned by the acceptance
// grid. Conservative mode keeps the m >= 2dk*2^(1/delta) formula verbatim.
struct PlanConstants {
    double c_d = 2.0;
    double c_m = 4.0;
    double c_s = 2.0;
};

ExpanderPlan plan_one_set(uint64_t s, uint64_t k, PlanMode mode = PlanMode::Tuned,
                          const PlanConstants& consts = {});
ExpanderPlan plan_special(uint64_t k, double delta = 0.1, const PlanConstants& consts = {});

// True iff every R subseteq S with r_lo <= |R| <= r_hi has more than
// alpha * |R| distinct neighbours. Throws if C(|S|, r_hi) exceeds the
// enumeration budget (1e7 subsets).
bool verify_expansion_exact(const BipartiteGraph& g, std::span<const uint32_t> S,
                            size_t r_lo, size_t r_hi, double alpha);

// Restricted variant: R ranges over the union of the subsets, with
// |R intersect S_i| <= caps[i] for every i.
bool verify_expansion_restricted(const BipartiteGraph& g,
                                 const std::vector<std::vector<uint32_t>>& subsets,
                                 const std::vector<uint64_t>& caps, size_t r_lo,
                                 size_t r_hi, double alpha);

}  // namespace ade
