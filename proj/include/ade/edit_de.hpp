#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ade/bitstring.hpp"
#include "ade/hamming_de.hpp"
#include "ade/sketch.hpp"

namespace ade {

struct EditConstants {
    unsigned hash_bits = 8;     // c: hash output width, >= 4
    double decay_exp = 1.0;     // c': exponent constant in the bound schedule
    ProtocolConstants protocol;
};

struct LevelParams {
    unsigned level = 1;       // i in [1, L]
    size_t block_size = 0;    // b_i; b_{i+1} halves b_i
    size_t block_count = 0;   // l_i = l_1 * 2^(i-1); trailing blocks may be
                              // entirely zero padding
};

// Level layout plus the public per-level plans both parties derive from
// (n, k, constants) alone.
struct EditParams {
    size_t n = 0;
    uint64_t k = 0;
    unsigned levels = 0;  // L
    std::vector<LevelParams> level;  // index 0 holds level 1

    // Public bound schedule for provenance distance delta = i - i':
    // max(ceil(k / 2^(0.9 c' delta)), ceil(k / log2^3(n/k))).
    uint64_t bound_for_gap(unsigned delta) const;
    uint64_t bound_floor = 1;
    double decay_ = 1.0;  // c'

    std::vector<SpecialPlan> level_plan;  // per level i >= 2 (index i-2)

    unsigned final_width = 13;   // level-L blocks as single RS symbols
    uint64_t final_errors = 0;   // 8k (distance 16k + 1)
};

// Throws when the parameter regime is invalid; in particular k below
// ~log2^4(n/k) is rejected (the protocol's small-k fallback is a different
// construction and out of scope here).
EditParams make_edit_params(size_t n, uint64_t k, const EditConstants& consts = {});

// Keyed block hash: c-bit truncation of a pseudorandom function of
// (seed, level, block index, payload). Identical across parties.
uint16_t hash_block(uint64_t shared_seed, unsigned level, size_t block_index,
                    const BitString& payload, unsigned hash_bits);

Sketch alice_edit_sketch(const BitString& x, uint64_t k, uint64_t shared_seed,
                         const EditConstants& consts = {});
std::optional<BitString> bob_edit_recover(const BitString& y, uint64_t k,
                                          const Sketch& sketch, uint64_t shared_seed,
                                          const EditConstants& consts = {});

// Monotone matching between x-blocks and y-start positions: block order and
// y-start order strictly increase, and the shift cost
// |u'_1 - u_1| + sum |(u'_j - u'_{j-1}) - (u_j - u_{j-1})| stays within k.
struct Matching {
    std::vector<std::pair<size_t, size_t>> pairs;  // (block start in x, start in y)
    uint64_t shift_cost = 0;
};

// Maximum-length monotone matching under the shift budget. Candidate y-starts
// for a block are restricted to within +-k of its x-position (any feasible
// chain keeps the cumulative shift within the budget). target_hashes[j] is
// the hash value block_ids[j] must match under hash_block for this level.
Matching dp_match(const std::vector<size_t>& block_ids,
                  const std::vector<uint16_t>& target_hashes, size_t block_size,
                  const BitString& y, uint64_t k, uint64_t shared_seed, unsigned level,
                  unsigned hash_bits);

enum class EditStyle { Random, Clustered, Prefix };

// Applies exactly k edit operations (insert/delete/substitute mix per style);
// the result is validated to satisfy ED(x, y) <= k.
BitString edit_adversary(const BitString& x, uint64_t k, EditStyle style, RngStream& rng);

}  // namespace ade
