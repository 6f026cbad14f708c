#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ade/bitstring.hpp"
#include "ade/rng.hpp"

namespace ade {

// Set of positions to invert; indices unique, sorted, in [0, n).
struct ErrorPattern {
    std::vector<uint32_t> flips;
};

BitString apply_errors(const BitString& x, const ErrorPattern& p);

// The (S, s, k, t) asymmetric-information description. Alice's side carries
// only sizes and bounds; Bob's side also carries the index sets. The
// constructor sorts entries jointly by bound (non-increasing) and validates.
struct SubsetSpec {
    uint64_t n = 0;
    std::vector<uint64_t> sizes;
    std::vector<uint64_t> bounds;
    std::optional<std::vector<std::vector<uint32_t>>> subsets;
    bool valid_ratio = false;  // s_i >= 2*k_i for all i (protocol precondition)

    static SubsetSpec make(uint64_t n, std::vector<uint64_t> sizes,
                           std::vector<uint64_t> bounds,
                           std::optional<std::vector<std::vector<uint32_t>>> subsets =
                               std::nullopt);

    size_t t() const { return sizes.size(); }
    uint64_t total_size() const;
    uint64_t total_bound() const;
};

// H(s, k) = sum_i log2(sum_{j<=k_i} C(s_i, j)); exact big-integer binomials
// up to s <= 2^20, Stirling-based log approximation beyond.
double entropy_H(const std::vector<uint64_t>& sizes, const std::vector<uint64_t>& bounds);
double entropy_H1(uint64_t s, uint64_t k);

// Number of intervals I_j = [2^(base^(j-1)), 2^(base^j)), j >= 1, containing
// at least one ratio s_i/k_i. Exponent comparison only; rejects ratios < 2.
unsigned chi(const std::vector<uint64_t>& sizes, const std::vector<uint64_t>& bounds,
             unsigned base = 10);

enum class Layout { Random, Contiguous, Interleaved };

struct SampledInstance {
    SubsetSpec spec;      // with subsets filled in
    ErrorPattern errors;  // flips placed inside the subsets
};

// Realizes an adversary instance: disjoint subsets of the requested sizes in
// the requested layout, and exactly k_i flips in each S_i (or a uniform count
// in [0, k_i] when uniform_counts is set).
SampledInstance sample_spec_instance(const SubsetSpec& sized_only, Layout layout,
                                     RngStream& rng, bool uniform_counts = false);

// Banded Levenshtein; returns the distance if <= bound, nullopt otherwise.
std::optional<uint64_t> edit_distance_at_most(const BitString& x, const BitString& y,
                                              uint64_t bound);

}  // namespace ade
