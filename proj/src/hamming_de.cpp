#include "ade/hamming_de.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ade/expcode.hpp"

namespace ade {

namespace {

constexpr uint16_t kFinalIteration = 0;

uint64_t suffix_sum(const std::vector<uint64_t>& v, size_t from) {
    return std::accumulate(v.begin() + from, v.end(), uint64_t{0});
}

std::vector<uint32_t> union_of(const std::vector<std::vector<uint32_t>>& subsets,
                               size_t count) {
    std::vector<uint32_t> u;
    for (size_t i = 0; i < count; ++i)
        u.insert(u.end(), subsets[i].begin(), subsets[i].end());
    std::sort(u.begin(), u.end());
    return u;
}

uint64_t graph_seed(uint64_t shared_seed, const char* label, uint64_t index = 0) {
    return derive_seed(shared_seed, label, {index});
}

void check_header(const Sketch& sk, ProtocolId proto, uint64_t n, uint16_t t) {
    if (sk.protocol != proto) throw std::invalid_argument("sketch: wrong protocol id");
    if (sk.n != n) throw std::invalid_argument("sketch: n mismatch");
    if (sk.t != t) throw std::invalid_argument("sketch: t mismatch");
}

}  // namespace

ProtocolPlan plan_general(const SubsetSpec& spec, const ProtocolConstants& consts) {
    if (!spec.valid_ratio)
        throw std::invalid_argument("plan_general: requires s_i >= 2*k_i");
    const auto& k = spec.bounds;
    const auto& s = spec.sizes;
    size_t t = spec.t();

    ProtocolPlan plan;
    size_t consumed = 0;  // i' in 0-based set counts
    uint64_t k_prev = 0;  // k'
    while (consumed + 2 <= t) {
        size_t found = 0;
        uint64_t lhs = k_prev;
        for (size_t i = consumed + 1; i <= t - 1; ++i) {  // candidate prefix end
            lhs += k[i - 1];
            uint64_t target = kGeneralC * suffix_sum(k, i);
            if (lhs > target) {
                found = i;
                break;
            }
        }
        if (!found) break;
        IterationPlan it;
        it.prefix_end = static_cast<uint32_t>(found);
        it.k_before = k_prev;
        it.k_target = kGeneralC * suffix_sum(k, found);
        it.k_scale = k_prev + std::accumulate(k.begin() + consumed, k.begin() + found,
                                              uint64_t{0});
        it.s_prefix = std::accumulate(s.begin(), s.begin() + found, uint64_t{0});
        it.expander = plan_one_set(it.s_prefix, it.k_scale, PlanMode::Tuned, consts.plan);
        plan.iterations.push_back(it);
        consumed = found;
        k_prev = it.k_target;
    }
    plan.final_k = k_prev + suffix_sum(k, consumed);
    plan.final_s = spec.total_size();
    plan.final_expander =
        plan_one_set(plan.final_s, plan.final_k, PlanMode::Tuned, consts.plan);
    return plan;
}

// --- one-set ------------------------------------------------------------------

Sketch alice_one_set(const BitString& x, uint64_t s, uint64_t k, uint64_t shared_seed,
                     const ProtocolConstants& consts) {
    auto plan = plan_one_set(s, k, PlanMode::Tuned, consts.plan);
    auto g = random_bipartite(static_cast<uint32_t>(x.size()),
                              static_cast<uint32_t>(plan.m), plan.d,
                              graph_seed(shared_seed, "final-graph"));
    Sketch sk;
    sk.protocol = ProtocolId::OneSet;
    sk.n = x.size();
    sk.t = 1;
    sk.add_bits(SegmentTag::Parity, kFinalIteration, encode_parities(x, g));
    return sk;
}

std::optional<BitString> bob_one_set(const BitString& y, const std::vector<uint32_t>& S,
                                     uint64_t k, const Sketch& sketch,
                                     uint64_t shared_seed,
                                     const ProtocolConstants& consts) {
    check_header(sketch, ProtocolId::OneSet, y.size(), 1);
    auto plan = plan_one_set(S.size(), k, PlanMode::Tuned, consts.plan);
    const Segment& seg = sketch.find(SegmentTag::Parity, kFinalIteration);
    if (seg.bit_length != plan.m)
        throw std::invalid_argument("bob_one_set: sketch does not match (s, k)");
    auto g = random_bipartite(static_cast<uint32_t>(y.size()),
                              static_cast<uint32_t>(plan.m), plan.d,
                              graph_seed(shared_seed, "final-graph"));
    auto out = bp_decode_restricted(y, sketch.segment_bits(seg), g, S);
    if (!out.fixpoint || out.unsatisfied != 0) return std::nullopt;
    return out.result;
}

// --- general ------------------------------------------------------------------

Sketch alice_general(const BitString& x, const std::vector<uint64_t>& sizes,
                     const std::vector<uint64_t>& bounds, uint64_t shared_seed,
                     const ProtocolConstants& consts) {
    auto spec = SubsetSpec::make(x.size(), sizes, bounds);
    if (!spec.valid_ratio)
        throw std::invalid_argument("alice_general: requires s_i >= 2*k_i");
    if (spec.t() == 1)  // degenerates to the one-set protocol, byte-identical
        return alice_one_set(x, spec.sizes[0], spec.bounds[0], shared_seed, consts);

    auto plan = plan_general(spec, consts);
    Sketch sk;
    sk.protocol = ProtocolId::General;
    sk.n = x.size();
    sk.t = static_cast<uint16_t>(spec.t());
    uint16_t iter = 1;
    for (const auto& it : plan.iterations) {
        auto g = random_bipartite(static_cast<uint32_t>(x.size()),
                                  static_cast<uint32_t>(it.expander.m), it.expander.d,
                                  graph_seed(shared_seed, "general-iter", iter));
        sk.add_bits(SegmentTag::Parity, iter, encode_parities(x, g));
        ++iter;
    }
    auto g = random_bipartite(static_cast<uint32_t>(x.size()),
                              static_cast<uint32_t>(plan.final_expander.m),
                              plan.final_expander.d,
                              graph_seed(shared_seed, "final-graph"));
    sk.add_bits(SegmentTag::Parity, kFinalIteration, encode_parities(x, g));
    return sk;
}

std::optional<BitString> bob_general(const BitString& y, const SubsetSpec& spec,
                                     const Sketch& sketch, uint64_t shared_seed,
                                     const ProtocolConstants& consts) {
    if (!spec.subsets) throw std::invalid_argument("bob_general: subsets required");
    if (!spec.valid_ratio)
        throw std::invalid_argument("bob_general: requires s_i >= 2*k_i");
    if (spec.t() == 1)
        return bob_one_set(y, (*spec.subsets)[0], spec.bounds[0], sketch, shared_seed,
                           consts);

    check_header(sketch, ProtocolId::General, y.size(),
                 static_cast<uint16_t>(spec.t()));
    auto plan = plan_general(spec, consts);

    BitString current = y;
    uint16_t iter = 1;
    for (const auto& it : plan.iterations) {
        const Segment& seg = sketch.find(SegmentTag::Parity, iter);
        if (seg.bit_length != it.expander.m)
            throw std::invalid_argument("bob_general: sketch does not match the plan");
        auto g = random_bipartite(static_cast<uint32_t>(y.size()),
                                  static_cast<uint32_t>(it.expander.m), it.expander.d,
                                  graph_seed(shared_seed, "general-iter", iter));
        auto allowed = union_of(*spec.subsets, it.prefix_end);
        auto out = bp_decode_restricted(current, sketch.segment_bits(seg), g, allowed);
        if (!out.fixpoint) return std::nullopt;  // decode-incomplete
        current = std::move(out.result);
        ++iter;
    }

    const Segment& seg = sketch.find(SegmentTag::Parity, kFinalIteration);
    auto g = random_bipartite(static_cast<uint32_t>(y.size()),
                              static_cast<uint32_t>(plan.final_expander.m),
                              plan.final_expander.d,
                              graph_seed(shared_seed, "final-graph"));
    auto allowed = union_of(*spec.subsets, spec.t());
    auto out = bp_decode_restricted(current, sketch.segment_bits(seg), g, allowed);
    if (!out.fixpoint || out.unsatisfied != 0) return std::nullopt;
    return out.result;
}

// --- chi grouping -------------------------------------------------------------

namespace {

// Band index j >= 1 with base^(j-1) <= log2(s/k) < base^j; exponent
// comparison only.
unsigned chi_band(uint64_t s, uint64_t k, unsigned base) {
    if (k == 0 || s < 2 * k) throw std::invalid_argument("chi grouping: ratio below 2");
    auto at_least = [&](uint64_t e) {
        if (e >= 127) return false;
        return static_cast<unsigned __int128>(s) >=
               (static_cast<unsigned __int128>(k) << static_cast<unsigned>(e));
    };
    unsigned j = 1;
    uint64_t e_hi = base;
    while (at_least(e_hi)) {
        ++j;
        if (e_hi > (uint64_t{1} << 40)) break;
        e_hi *= base;
    }
    return j;
}

}  // namespace

GroupedSpec group_by_chi(const std::vector<uint64_t>& sizes,
                         const std::vector<uint64_t>& bounds, unsigned base) {
    if (sizes.size() != bounds.size())
        throw std::invalid_argument("group_by_chi: length mismatch");
    std::vector<unsigned> bands(sizes.size());
    std::vector<unsigned> present;
    for (size_t i = 0; i < sizes.size(); ++i) {
        bands[i] = chi_band(sizes[i], bounds[i], base);
        present.push_back(bands[i]);
    }
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());

    GroupedSpec out;
    out.sizes.assign(present.size(), 0);
    out.bounds.assign(present.size(), 0);
    out.group_of.resize(sizes.size());
    for (size_t i = 0; i < sizes.size(); ++i) {
        size_t gi = std::lower_bound(present.begin(), present.end(), bands[i]) -
                    present.begin();
        out.group_of[i] = static_cast<uint32_t>(gi);
        out.sizes[gi] += sizes[i];
        out.bounds[gi] += bounds[i];
    }
    return out;
}

SubsetSpec group_subsets(const SubsetSpec& spec, const GroupedSpec& grouping) {
    if (!spec.subsets) throw std::invalid_argument("group_subsets: subsets required");
    std::vector<std::vector<uint32_t>> merged(grouping.sizes.size());
    for (size_t i = 0; i < spec.t(); ++i) {
        auto& dst = merged[grouping.group_of[i]];
        dst.insert(dst.end(), (*spec.subsets)[i].begin(), (*spec.subsets)[i].end());
    }
    return SubsetSpec::make(spec.n, grouping.sizes, grouping.bounds, merged);
}

// --- special setting ----------------------------------------------------------

SpecialPlan make_special_plan(uint64_t n, const std::vector<uint64_t>& sizes,
                              const std::vector<uint64_t>& bounds,
                              std::optional<uint64_t> k_prime_floor,
                              const ProtocolConstants& consts) {
    SpecialPlan plan;
    plan.n = n;
    plan.k_plan = std::accumulate(bounds.begin(), bounds.end(), uint64_t{0});
    if (plan.k_plan == 0) throw std::invalid_argument("make_special_plan: zero budget");
    uint64_t n_hat = std::accumulate(sizes.begin(), sizes.end(), uint64_t{0});
    if (k_prime_floor) {
        plan.k_prime = std::max<uint64_t>(1, *k_prime_floor);
    } else {
        double log_ratio =
            std::max(1.0, std::log2(static_cast<double>(std::max<uint64_t>(2, n_hat)) /
                                    static_cast<double>(plan.k_plan)));
        plan.k_prime = std::max<uint64_t>(
            1, static_cast<uint64_t>(std::ceil(static_cast<double>(plan.k_plan) / log_ratio)));
    }
    plan.expander = plan_special(plan.k_plan, 0.1, consts.plan);
    plan.rs_errors = 2 * plan.k_prime;
    plan.rs_width = rs_pick_width(n, plan.rs_errors);
    return plan;
}

SpecialParts special_encode(const BitString& x, const SpecialPlan& plan,
                            const BipartiteGraph& g) {
    SpecialParts parts;
    parts.parities = encode_parities(x, g);
    parts.redundancy = rs_syndrome(bits_to_symbols(x, plan.rs_width), plan.rs_errors);
    return parts;
}

std::optional<BitString> special_decode(const BitString& y, const BitString& parities,
                                        const SymbolBlock& redundancy,
                                        const SpecialPlan& plan, const BipartiteGraph& g,
                                        const std::vector<std::vector<uint32_t>>& subsets,
                                        const std::vector<uint64_t>& caps) {
    auto stage1 = bp_decode_budgeted(y, parities, g, subsets, caps);
    auto fixed = rs_correct(bits_to_symbols(stage1.result, plan.rs_width), redundancy,
                            plan.rs_errors);
    if (!fixed) return std::nullopt;
    return symbols_to_bits(*fixed, y.size());
}

Sketch alice_special(const BitString& x, const std::vector<uint64_t>& sizes,
                     const std::vector<uint64_t>& bounds, uint64_t shared_seed,
                     std::optional<uint64_t> k_prime_floor,
                     const ProtocolConstants& consts) {
    auto plan = make_special_plan(x.size(), sizes, bounds, k_prime_floor, consts);
    auto g = random_bipartite(static_cast<uint32_t>(x.size()),
                              static_cast<uint32_t>(plan.expander.m), plan.expander.d,
                              graph_seed(shared_seed, "special-graph"));
    auto parts = special_encode(x, plan, g);
    Sketch sk;
    sk.protocol = ProtocolId::Special;
    sk.n = x.size();
    sk.t = static_cast<uint16_t>(sizes.size());
    sk.add_bits(SegmentTag::Parity, 0, parts.parities);
    auto red = serialize_symbols(parts.redundancy);
    uint64_t red_bits = red.size() * 8;
    sk.add_bytes(SegmentTag::Syndrome, 0, std::move(red), red_bits);
    return sk;
}

std::optional<BitString> bob_special(const BitString& y, const SubsetSpec& spec,
                                     const Sketch& sketch, uint64_t shared_seed,
                                     std::optional<uint64_t> k_prime_floor,
                                     const ProtocolConstants& consts) {
    if (!spec.subsets) throw std::invalid_argument("bob_special: subsets required");
    if (!spec.valid_ratio)
        throw std::invalid_argument("bob_special: requires s_i >= 2*k_i");
    check_header(sketch, ProtocolId::Special, y.size(),
                 static_cast<uint16_t>(spec.t()));
    auto plan = make_special_plan(y.size(), spec.sizes, spec.bounds, k_prime_floor, consts);
    const Segment& par = sketch.find(SegmentTag::Parity, 0);
    if (par.bit_length != plan.expander.m)
        throw std::invalid_argument("bob_special: sketch does not match the plan");
    const Segment& red = sketch.find(SegmentTag::Syndrome, 0);
    auto g = random_bipartite(static_cast<uint32_t>(y.size()),
                              static_cast<uint32_t>(plan.expander.m), plan.expander.d,
                              graph_seed(shared_seed, "special-graph"));
    return special_decode(y, sketch.segment_bits(par), parse_symbols(red.payload), plan,
                          g, *spec.subsets, spec.bounds);
}

// --- stochastic ECC -----------------------------------------------------------

namespace {

// Exact wire size of the general-protocol sketch, from the plan alone.
uint64_t general_sketch_wire_bits(const ProtocolPlan& plan, bool degenerate_one_set) {
    uint64_t bytes = kSketchHeaderBytes;
    if (!degenerate_one_set)
        for (const auto& it : plan.iterations)
            bytes += kSegmentHeaderBytes + (it.expander.m + 7) / 8;
    bytes += kSegmentHeaderBytes + (plan.final_expander.m + 7) / 8;
    return bytes * 8;
}

}  // namespace

EccPlan plan_ecc(uint64_t n, const std::vector<uint64_t>& sizes,
                 const std::vector<uint64_t>& bounds, const ProtocolConstants& consts) {
    EccPlan plan;
    plan.n = n;
    plan.grouping = group_by_chi(sizes, bounds, consts.chi_base);
    auto grouped_spec = SubsetSpec::make(n, plan.grouping.sizes, plan.grouping.bounds);
    auto de_plan = plan_general(grouped_spec, consts);
    plan.sketch_bits =
        general_sketch_wire_bits(de_plan, grouped_spec.t() == 1);

    plan.rs_errors = std::accumulate(bounds.begin(), bounds.end(), uint64_t{0});
    plan.rs_width = rs_pick_width(plan.sketch_bits, plan.rs_errors);
    plan.redundancy_bits = plan.sketch_bits + 2 * plan.rs_errors * plan.rs_width;
    if (plan.redundancy_bits >= n)
        throw std::invalid_argument("plan_ecc: redundancy exceeds n");
    plan.message_len = n - plan.redundancy_bits;
    return plan;
}

BitString ecc_encode(const BitString& msg, const EccPlan& plan, uint64_t shared_seed,
                     const ProtocolConstants& consts) {
    if (msg.size() != plan.message_len)
        throw std::invalid_argument("ecc_encode: message length mismatch");
    BitString padded(plan.n);
    padded.write_slice(0, msg, msg.size());
    Sketch sk = alice_general(padded, plan.grouping.sizes, plan.grouping.bounds,
                              derive_seed(shared_seed, "ecc-de"), consts);
    auto bytes = sk.serialize();
    BitString sketch_bits = BitString::from_bytes(bytes, bytes.size() * 8);
    if (sketch_bits.size() != plan.sketch_bits)
        throw std::logic_error("ecc_encode: sketch size diverged from the plan");

    auto symbols = bits_to_symbols(sketch_bits, plan.rs_width);
    auto red = rs_syndrome(symbols, plan.rs_errors);
    BitString red_bits = symbols_to_bits(red, 2 * plan.rs_errors * plan.rs_width);

    BitString codeword(plan.n);
    codeword.write_slice(0, msg, msg.size());
    codeword.write_slice(plan.message_len, sketch_bits, sketch_bits.size());
    codeword.write_slice(plan.message_len + plan.sketch_bits, red_bits, red_bits.size());
    return codeword;
}

std::optional<BitString> ecc_decode(const BitString& received, const SubsetSpec& spec,
                                    const EccPlan& plan, uint64_t shared_seed,
                                    const ProtocolConstants& consts) {
    if (received.size() != plan.n)
        throw std::invalid_argument("ecc_decode: length mismatch");

    // Recover the sketch from the tail code; errors may hit both parts.
    BitString tail_data = received.slice_padded(plan.message_len, plan.sketch_bits);
    BitString tail_red = received.slice_padded(plan.message_len + plan.sketch_bits,
                                               2 * plan.rs_errors * plan.rs_width);
    auto corrected = rs_correct(bits_to_symbols(tail_data, plan.rs_width),
                                bits_to_symbols(tail_red, plan.rs_width), plan.rs_errors);
    if (!corrected) return std::nullopt;

    Sketch sk;
    try {
        sk = Sketch::parse(symbols_to_bits(*corrected, plan.sketch_bits).to_bytes());
    } catch (const std::exception&) {
        return std::nullopt;  // miscorrected tail
    }

    BitString padded(plan.n);
    BitString prefix = received.slice_padded(0, plan.message_len);
    padded.write_slice(0, prefix, plan.message_len);  // tail replaced by zeros

    auto grouped = group_subsets(spec, plan.grouping);
    auto recovered = bob_general(padded, grouped, sk,
                                 derive_seed(shared_seed, "ecc-de"), consts);
    if (!recovered) return std::nullopt;
    return recovered->slice_padded(0, plan.message_len);
}

// --- two-sided ----------------------------------------------------------------

SubsetSpec two_sided_wrap(const SubsetSpec& spec_B, uint64_t k_A, uint64_t n) {
    if (spec_B.n != n) throw std::invalid_argument("two_sided_wrap: n mismatch");
    if (k_A == 0) return spec_B;
    uint64_t used = spec_B.total_size();
    if (used + k_A > n)
        throw std::invalid_argument("two_sided_wrap: complement too small for k_A");

    auto sizes = spec_B.sizes;
    auto bounds = spec_B.bounds;
    sizes.push_back(n - used);
    bounds.push_back(k_A);

    if (!spec_B.subsets) return SubsetSpec::make(n, sizes, bounds);

    std::vector<uint8_t> taken(n, 0);
    for (const auto& set : *spec_B.subsets)
        for (uint32_t v : set) taken[v] = 1;
    std::vector<uint32_t> complement;
    complement.reserve(n - used);
    for (uint32_t v = 0; v < n; ++v)
        if (!taken[v]) complement.push_back(v);

    auto subsets = *spec_B.subsets;
    subsets.push_back(std::move(complement));
    return SubsetSpec::make(n, sizes, bounds, subsets);
}

}  // namespace ade
