#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "ade/bitstring.hpp"
#include "ade/expander.hpp"

namespace ade {

// Parity vector of x under the graph: check i is the XOR of x over the edge
// multiset of i, so a duplicate edge cancels.
BitString encode_parities(const BitString& x, const BipartiteGraph& g);

struct DecodeOutcome {
    BitString result;
    bool fixpoint = false;  // false means decode-incomplete (cap hit)
    size_t flips = 0;
    size_t unsatisfied = 0;  // checks still violated at exit
};

// Bit-flipping decoder state: target parities z, working string, per-check
// unsatisfied flags, per-vertex unsatisfied-edge counters (multiplicity
// counted), and an index-ordered candidate set over eligible vertices.
//
// Candidate rule: unsatisfied-edge counter strictly above d/2, and flipping
// must strictly reduce the number of unsatisfied checks. On duplicate-free
// rows the two conditions coincide; a duplicate edge XOR-cancels, so the
// second condition (the decrease-the-mismatch rule the decoders are built
// on) is checked over odd-multiplicity edges only. This keeps every flip
// strictly decreasing, hence termination within the initial unsatisfied
// count.
class ParityState {
public:
    ParityState(const BipartiteGraph& g, const BitString& z, BitString x0,
                const std::vector<uint32_t>& eligible);

    // Flips vertex v, updating flags/counters incrementally. Returns the
    // change in the number of unsatisfied checks.
    int flip(uint32_t v);

    bool is_candidate(uint32_t v) const {
        return 2 * counters_[v] > graph_.d && 2 * odd_counters_[v] > odd_degree_[v];
    }
    const std::set<uint32_t>& candidates() const { return candidates_; }
    size_t total_unsatisfied() const { return total_unsat_; }

    // (total unsatisfied checks, max vertex counter); pure read.
    std::pair<size_t, size_t> unsatisfied_profile() const;

    const BitString& current() const { return x_; }
    BitString take() { return std::move(x_); }

    // From-scratch recount; used by the periodic consistency assertion.
    bool counters_consistent() const;

private:
    const BipartiteGraph& graph_;
    std::vector<std::vector<uint32_t>> reverse_;      // all edges
    std::vector<std::vector<uint32_t>> reverse_odd_;  // odd-multiplicity edges
    BitString x_;
    std::vector<uint8_t> unsat_;
    std::vector<uint32_t> counters_;      // edges into unsat checks, with multiplicity
    std::vector<uint32_t> odd_counters_;  // odd-multiplicity edges into unsat checks
    std::vector<uint32_t> odd_degree_;
    std::vector<uint8_t> eligible_;
    std::set<uint32_t> candidates_;
    size_t total_unsat_ = 0;
};

// Repeatedly flips the lowest-index vertex in `allowed` whose unsatisfied-edge
// counter exceeds d/2, until fixpoint or max_flips (0 means the natural cap,
// the initial unsatisfied count). Never touches a bit outside `allowed`.
DecodeOutcome bp_decode_restricted(const BitString& y, const BitString& z,
                                   const BipartiteGraph& g,
                                   std::span<const uint32_t> allowed,
                                   size_t max_flips = 0);

// Flip-budgeted variant: subset S_i is open while its net-flip count is below
// 19*k_i, otherwise only its already-net-flipped bits stay flippable. The
// restriction set is re-evaluated on every iteration.
DecodeOutcome bp_decode_budgeted(const BitString& y, const BitString& z,
                                 const BipartiteGraph& g,
                                 const std::vector<std::vector<uint32_t>>& subsets,
                                 const std::vector<uint64_t>& bounds);

}  // namespace ade
