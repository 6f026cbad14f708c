#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ade/core.hpp"
#include "ade/expander.hpp"
#include "ade/sketch.hpp"
#include "ade/syndrome.hpp"

namespace ade {

// Iteration constant of the general protocol's reduction rule; fixed, not a
// flag.
constexpr uint64_t kGeneralC = 10;

struct ProtocolConstants {
    PlanConstants plan;
    unsigned chi_base = 10;
};

// One record per reduction iteration: the active prefix, the residual bound
// entering (k'), the target (k''), and the expander sized for the prefix.
struct IterationPlan {
    uint32_t prefix_end;  // 1-based i: the iteration decodes over S_1..S_i
    uint64_t k_before;
    uint64_t k_target;
    uint64_t k_scale;  // k' + sum of bounds consumed this iteration
    uint64_t s_prefix;
    ExpanderPlan expander;
};

// Deterministic function of (n, sizes, bounds, constants); independent of
// data and of subset positions.
struct ProtocolPlan {
    std::vector<IterationPlan> iterations;
    uint64_t final_k = 0;
    uint64_t final_s = 0;
    ExpanderPlan final_expander;
};

ProtocolPlan plan_general(const SubsetSpec& spec, const ProtocolConstants& consts = {});

// --- one-set protocol -------------------------------------------------------

Sketch alice_one_set(const BitString& x, uint64_t s, uint64_t k, uint64_t shared_seed,
                     const ProtocolConstants& consts = {});
std::optional<BitString> bob_one_set(const BitString& y, const std::vector<uint32_t>& S,
                                     uint64_t k, const Sketch& sketch,
                                     uint64_t shared_seed,
                                     const ProtocolConstants& consts = {});

// --- general (s, k, t) protocol ---------------------------------------------

Sketch alice_general(const BitString& x, const std::vector<uint64_t>& sizes,
                     const std::vector<uint64_t>& bounds, uint64_t shared_seed,
                     const ProtocolConstants& consts = {});
std::optional<BitString> bob_general(const BitString& y, const SubsetSpec& spec,
                                     const Sketch& sketch, uint64_t shared_seed,
                                     const ProtocolConstants& consts = {});

// --- chi grouping ------------------------------------------------------------

// Merges subsets whose ratios s_i/k_i share a band; the map depends only on
// the public sizes/bounds, so both parties group identically.
struct GroupedSpec {
    std::vector<uint64_t> sizes;
    std::vector<uint64_t> bounds;
    std::vector<uint32_t> group_of;  // original index -> group index
};

GroupedSpec group_by_chi(const std::vector<uint64_t>& sizes,
                         const std::vector<uint64_t>& bounds, unsigned base = 10);
SubsetSpec group_subsets(const SubsetSpec& spec, const GroupedSpec& grouping);

// --- special geometric setting ----------------------------------------------

// Public plan shared by both parties: one constant-degree graph over n left
// vertices plus a stage-2 syndrome catching 2k' residual errors.
struct SpecialPlan {
    uint64_t n = 0;
    uint64_t k_plan = 0;   // sum of bounds
    uint64_t k_prime = 0;  // stage-2 threshold
    ExpanderPlan expander;
    unsigned rs_width = 8;
    uint64_t rs_errors = 0;  // syndrome budget = 2 * k_prime
};

SpecialPlan make_special_plan(uint64_t n, const std::vector<uint64_t>& sizes,
                              const std::vector<uint64_t>& bounds,
                              std::optional<uint64_t> k_prime_floor,
                              const ProtocolConstants& consts = {});

struct SpecialParts {
    BitString parities;
    SymbolBlock redundancy;
};

// Graph-level building blocks; the edit-distance protocol drives these with
// its own graphs while the standalone wrappers below derive everything from
// the shared seed.
SpecialParts special_encode(const BitString& x, const SpecialPlan& plan,
                            const BipartiteGraph& g);
std::optional<BitString> special_decode(const BitString& y, const BitString& parities,
                                        const SymbolBlock& redundancy,
                                        const SpecialPlan& plan, const BipartiteGraph& g,
                                        const std::vector<std::vector<uint32_t>>& subsets,
                                        const std::vector<uint64_t>& caps);

Sketch alice_special(const BitString& x, const std::vector<uint64_t>& sizes,
                     const std::vector<uint64_t>& bounds, uint64_t shared_seed,
                     std::optional<uint64_t> k_prime_floor = std::nullopt,
                     const ProtocolConstants& consts = {});
std::optional<BitString> bob_special(const BitString& y, const SubsetSpec& spec,
                                     const Sketch& sketch, uint64_t shared_seed,
                                     std::optional<uint64_t> k_prime_floor = std::nullopt,
                                     const ProtocolConstants& consts = {});

// --- stochastic ECC -----------------------------------------------------------

struct EccPlan {
    uint64_t n = 0;
    uint64_t message_len = 0;
    uint64_t redundancy_bits = 0;  // r = |C0(sketch)|
    uint64_t sketch_bits = 0;      // serialized DE sketch, byte-padded
    uint64_t rs_errors = 0;        // tail budget = sum of bounds
    unsigned rs_width = 8;
    GroupedSpec grouping;
};

EccPlan plan_ecc(uint64_t n, const std::vector<uint64_t>& sizes,
                 const std::vector<uint64_t>& bounds,
                 const ProtocolConstants& consts = {});

BitString ecc_encode(const BitString& msg, const EccPlan& plan, uint64_t shared_seed,
                     const ProtocolConstants& consts = {});
std::optional<BitString> ecc_decode(const BitString& received, const SubsetSpec& spec,
                                    const EccPlan& plan, uint64_t shared_seed,
                                    const ProtocolConstants& consts = {});

// --- two-sided reduction ------------------------------------------------------

// Appends the complement of Bob's subsets with Alice's bound; k_A = 0 returns
// the spec unchanged (a k = 0 subset is not representable).
SubsetSpec two_sided_wrap(const SubsetSpec& spec_B, uint64_t k_A, uint64_t n);

}  // namespace ade
