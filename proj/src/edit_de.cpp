#include "ade/edit_de.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ade/expcode.hpp"

namespace ade {

uint64_t EditParams::bound_for_gap(unsigned delta) const {
    // Decay exponent 0.9 * c' per level of provenance distance.
    double decayed = static_cast<double>(k) / std::exp2(0.9 * decay_ * delta);
    uint64_t b = static_cast<uint64_t>(std::ceil(decayed));
    return std::max(std::max<uint64_t>(b, bound_floor), uint64_t{1});
}

EditParams make_edit_params(size_t n, uint64_t k, const EditConstants& consts) {
    if (k < 1) throw std::invalid_argument("edit protocol: k must be >= 1");
    if (consts.hash_bits < 4 || consts.hash_bits > 16)
        throw std::invalid_argument("edit protocol: hash width must be in [4,16]");

    EditParams p;
    p.n = n;
    p.k = k;
    p.decay_ = consts.decay_exp;

    double log_ratio = std::log2(static_cast<double>(n) / static_cast<double>(k));
    if (log_ratio < 3.0)
        throw std::invalid_argument("edit protocol: n/k too small (need n >= 8k)");
    // Small-k regime: below ~log^4(n/k) the paper switches to the random
    // protocol of Haeupler (FOCS'19); that fallback is not part of this
    // construction, so the regime is rejected outright.
    double small_k = std::pow(log_ratio, 4.0) / 512.0;
    if (static_cast<double>(k) < small_k)
        throw std::invalid_argument(
            "edit protocol: k below ~log2^4(n/k); this regime needs the Haeupler "
            "fallback protocol, which is out of scope");

    size_t target = std::max<size_t>(8, static_cast<size_t>(std::ceil(log_ratio)));
    target = std::min<size_t>(target, 16);
    size_t b1 = n / (6 * k);
    if (b1 < target)
        throw std::invalid_argument("edit protocol: n < 24k leaves no room for levels");
    unsigned L = 1;
    while ((b1 >> L) >= target) ++L;
    size_t bL = b1 >> (L - 1);

    p.levels = L;
    for (unsigned i = 1; i <= L; ++i) {
        LevelParams lp;
        lp.level = i;
        lp.block_size = bL << (L - i);
        lp.block_count = (n + (bL << (L - 1)) - 1) / (bL << (L - 1));  // l_1
        lp.block_count <<= (i - 1);
        p.level.push_back(lp);
    }

    p.bound_floor = std::max<uint64_t>(
        1, static_cast<uint64_t>(std::ceil(static_cast<double>(k) /
                                           std::pow(log_ratio, 3.0))));

    for (unsigned i = 2; i <= L; ++i) {
        std::vector<uint64_t> schedule;
        for (unsigned gap = 1; gap < i; ++gap) schedule.push_back(p.bound_for_gap(gap));
        uint64_t li = p.level[i - 1].block_count;
        p.level_plan.push_back(make_special_plan(li, {li}, schedule, std::nullopt,
                                                 consts.protocol));
    }

    p.final_errors = 8 * k;
    size_t lL = p.level[L - 1].block_count;
    unsigned w = static_cast<unsigned>(std::max<size_t>(bL, 4));
    while (w <= 16 && ((size_t{1} << w) - 1) < lL + 2 * p.final_errors) ++w;
    if (w > 16)
        throw std::invalid_argument("edit protocol: last level too wide for RS symbols");
    p.final_width = w;
    return p;
}

uint16_t hash_block(uint64_t shared_seed, unsigned level, size_t block_index,
                    const BitString& payload, unsigned hash_bits) {
    uint64_t h = derive_seed(shared_seed, "blockhash", {level, block_index});
    for (uint64_t w : payload.words()) h = mix64(h ^ w);
    h = mix64(h ^ payload.size());
    return static_cast<uint16_t>(h & ((uint64_t{1} << hash_bits) - 1));
}

namespace {

uint64_t level_graph_seed(uint64_t shared_seed, unsigned level) {
    return derive_seed(shared_seed, "edit-graph", {level});
}

std::vector<uint16_t> hash_level(const BitString& s, const LevelParams& lp,
                                 uint64_t seed, unsigned hash_bits) {
    std::vector<uint16_t> v(lp.block_count);
    for (size_t j = 0; j < lp.block_count; ++j)
        v[j] = hash_block(seed, lp.level, j,
                          s.slice_padded(j * lp.block_size, lp.block_size), hash_bits);
    return v;
}

BitString pack_hashes(const std::vector<uint16_t>& v, unsigned hash_bits) {
    BitString out(v.size() * hash_bits);
    for (size_t j = 0; j < v.size(); ++j)
        for (unsigned b = 0; b < hash_bits; ++b)
            if ((v[j] >> b) & 1) out.set(j * hash_bits + b, true);
    return out;
}

std::vector<uint16_t> unpack_hashes(const BitString& bits, size_t count,
                                    unsigned hash_bits) {
    std::vector<uint16_t> v(count, 0);
    for (size_t j = 0; j < count; ++j)
        for (unsigned b = 0; b < hash_bits; ++b)
            if (bits.get(j * hash_bits + b)) v[j] |= static_cast<uint16_t>(1u << b);
    return v;
}

BitString extract_plane(const std::vector<uint16_t>& v, unsigned plane) {
    BitString out(v.size());
    for (size_t j = 0; j < v.size(); ++j)
        if ((v[j] >> plane) & 1) out.set(j, true);
    return out;
}

// Level-L blocks as single RS symbols (block bits LSB-first, zero-padded).
SymbolBlock blocks_to_symbols(const BitString& s, const LevelParams& lp, unsigned w) {
    SymbolBlock out;
    out.width = w;
    out.symbols.resize(lp.block_count, 0);
    for (size_t j = 0; j < lp.block_count; ++j) {
        BitString block = s.slice_padded(j * lp.block_size, lp.block_size);
        uint16_t sym = 0;
        for (size_t b = 0; b < lp.block_size; ++b)
            if (block.get(b)) sym |= static_cast<uint16_t>(1u << b);
        out.symbols[j] = sym;
    }
    return out;
}

}  // namespace

Sketch alice_edit_sketch(const BitString& x, uint64_t k, uint64_t shared_seed,
                         const EditConstants& consts) {
    auto params = make_edit_params(x.size(), k, consts);
    const unsigned c = consts.hash_bits;

    Sketch sk;
    sk.protocol = ProtocolId::Edit;
    sk.n = x.size();
    sk.t = static_cast<uint16_t>(params.levels);

    // Level 1: the hash vector itself.
    auto v1 = hash_level(x, params.level[0], shared_seed, c);
    sk.add_bits(SegmentTag::HashVec, 1, pack_hashes(v1, c));

    // Levels 2..L: one special-setting sub-sketch per bit plane, all planes
    // sharing the level's graph.
    for (unsigned i = 2; i <= params.levels; ++i) {
        const auto& lp = params.level[i - 1];
        const auto& plan = params.level_plan[i - 2];
        auto v = hash_level(x, lp, shared_seed, c);
        auto g = random_bipartite(static_cast<uint32_t>(lp.block_count),
                                  static_cast<uint32_t>(plan.expander.m),
                                  plan.expander.d, level_graph_seed(shared_seed, i));
        std::vector<uint8_t> payload;
        for (unsigned plane = 0; plane < c; ++plane) {
            auto parts = special_encode(extract_plane(v, plane), plan, g);
            auto par = parts.parities.to_bytes();
            auto red = serialize_symbols(parts.redundancy);
            payload.insert(payload.end(), par.begin(), par.end());
            payload.insert(payload.end(), red.begin(), red.end());
        }
        uint64_t bits = payload.size() * 8;
        sk.add_bytes(SegmentTag::LevelSketch, static_cast<uint16_t>(i),
                     std::move(payload), bits);
    }

    // Final redundancy over the last level's blocks, distance 16k + 1.
    auto final_syms = blocks_to_symbols(x, params.level[params.levels - 1],
                                        params.final_width);
    auto red = serialize_symbols(rs_syndrome(final_syms, params.final_errors));
    uint64_t red_bits = red.size() * 8;
    sk.add_bytes(SegmentTag::Final, static_cast<uint16_t>(params.levels),
                 std::move(red), red_bits);
    return sk;
}

Matching dp_match(const std::vector<size_t>& block_ids,
                  const std::vector<uint16_t>& target_hashes, size_t block_size,
                  const BitString& y, uint64_t k, uint64_t shared_seed, unsigned level,
                  unsigned hash_bits) {
    if (block_ids.size() != target_hashes.size())
        throw std::invalid_argument("dp_match: target count mismatch");

    struct Pair {
        size_t ordinal;  // index into block_ids
        size_t pos;      // block start in x
        size_t ystart;
    };
    std::vector<Pair> pairs;

    // Any feasible chain keeps |ystart - pos| within the total budget, so
    // candidates sit within +-k of the block position.
    for (size_t a = 0; a < block_ids.size(); ++a) {
        size_t pos = block_ids[a] * block_size;
        if (block_size > y.size()) break;
        size_t lo = pos > k ? pos - k : 0;
        size_t hi = std::min(pos + k, y.size() - block_size);
        for (size_t start = lo; start <= hi; ++start) {
            BitString window = y.slice_padded(start, block_size);
            if (hash_block(shared_seed, level, block_ids[a], window, hash_bits) ==
                target_hashes[a])
                pairs.push_back({a, pos, start});
            if (start == hi) break;  // hi may be SIZE_MAX-adjacent; be explicit
        }
    }

    size_t np = pairs.size();
    size_t budget = static_cast<size_t>(k) + 1;
    // best[p][l]: longest matching ending at pair p with shift cost <= l.
    std::vector<uint32_t> best(np * budget, 0);
    std::vector<uint32_t> parent(np * budget, UINT32_MAX);
    std::vector<uint32_t> parent_l(np * budget, 0);

    auto step_cost = [](const Pair& prev, const Pair& to) -> uint64_t {
        int64_t dx = static_cast<int64_t>(to.pos) - static_cast<int64_t>(prev.pos);
        int64_t dy = static_cast<int64_t>(to.ystart) - static_cast<int64_t>(prev.ystart);
        return static_cast<uint64_t>(dx > dy ? dx - dy : dy - dx);
    };

    for (size_t p = 0; p < np; ++p) {
        uint64_t start_cost = pairs[p].pos > pairs[p].ystart
                                  ? pairs[p].pos - pairs[p].ystart
                                  : pairs[p].ystart - pairs[p].pos;
        for (size_t l = 0; l < budget; ++l) {
            uint32_t bestlen = start_cost <= l ? 1 : 0;
            uint32_t bp = UINT32_MAX, bl = 0;
            for (size_t q = 0; q < p; ++q) {
                if (pairs[q].ordinal >= pairs[p].ordinal) continue;
                if (pairs[q].ystart >= pairs[p].ystart) continue;
                uint64_t sc = step_cost(pairs[q], pairs[p]);
                if (sc > l) continue;
                uint32_t cand = best[q * budget + (l - sc)];
                if (cand > 0 && cand + 1 > bestlen) {
                    bestlen = cand + 1;
                    bp = static_cast<uint32_t>(q);
                    bl = static_cast<uint32_t>(l - sc);
                }
            }
            best[p * budget + l] = bestlen;
            parent[p * budget + l] = bp;
            parent_l[p * budget + l] = bl;
        }
    }

    Matching m;
    uint32_t top = 0;
    size_t top_p = 0;
    for (size_t p = 0; p < np; ++p)
        if (best[p * budget + k] > top) {
            top = best[p * budget + k];
            top_p = p;
        }
    if (top == 0) return m;

    size_t p = top_p, l = k;
    std::vector<std::pair<size_t, size_t>> rev;
    while (p != UINT32_MAX) {
        rev.push_back({pairs[p].pos, pairs[p].ystart});
        uint32_t pp = parent[p * budget + l];
        l = parent_l[p * budget + l];
        p = pp;
        if (p == UINT32_MAX) break;
    }
    std::reverse(rev.begin(), rev.end());
    m.pairs = std::move(rev);

    // Monotonicity and the cost bound are structural; assert on every output.
    uint64_t cost = 0;
    for (size_t i = 0; i < m.pairs.size(); ++i) {
        int64_t dx = static_cast<int64_t>(m.pairs[i].first) -
                     (i ? static_cast<int64_t>(m.pairs[i - 1].first) : 0);
        int64_t dy = static_cast<int64_t>(m.pairs[i].second) -
                     (i ? static_cast<int64_t>(m.pairs[i - 1].second) : 0);
        if (i) {
            assert(dx > 0 && dy > 0);
        }
        cost += static_cast<uint64_t>(dx > dy ? dx - dy : dy - dx);
    }
    m.shift_cost = cost;
    assert(cost <= k);
    return m;
}

std::optional<BitString> bob_edit_recover(const BitString& y, uint64_t k,
                                          const Sketch& sketch, uint64_t shared_seed,
                                          const EditConstants& consts) {
    if (sketch.protocol != ProtocolId::Edit)
        throw std::invalid_argument("bob_edit_recover: wrong protocol id");
    const size_t n = sketch.n;
    uint64_t len_gap = y.size() > n ? y.size() - n : n - y.size();
    if (len_gap > k) return std::nullopt;  // inconsistent with ED <= k

    auto params = make_edit_params(n, k, consts);
    if (sketch.t != params.levels)
        throw std::invalid_argument("bob_edit_recover: level count mismatch");
    const unsigned c = consts.hash_bits;

    BitString xt(n);  // unfilled positions stay zero and hash as zero

    // Provenance of each current-level block: the level whose refill most
    // recently covered it. Level-1 processing roots everything.
    std::vector<uint32_t> prov(params.level[0].block_count, 1);

    // Level 1: the received hash vector is exact.
    {
        const auto& lp = params.level[0];
        auto seg = sketch.find(SegmentTag::HashVec, 1);
        auto v1 = unpack_hashes(sketch.segment_bits(seg), lp.block_count, c);
        auto ours = hash_level(xt, lp, shared_seed, c);
        std::vector<size_t> bad;
        std::vector<uint16_t> targets;
        for (size_t j = 0; j < lp.block_count; ++j)
            if (v1[j] != ours[j]) {
                bad.push_back(j);
                targets.push_back(v1[j]);
            }
        auto w = dp_match(bad, targets, lp.block_size, y, k, shared_seed, 1, c);
        for (auto& [posx, posy] : w.pairs)
            xt.write_slice(posx, y.slice_padded(posy, lp.block_size), lp.block_size);
    }

    for (unsigned i = 2; i <= params.levels; ++i) {
        const auto& lp = params.level[i - 1];
        const auto& plan = params.level_plan[i - 2];

        // Split provenance to this level's blocks.
        std::vector<uint32_t> prov_i(lp.block_count);
        for (size_t j = 0; j < lp.block_count; ++j) prov_i[j] = prov[j / 2];
        prov = std::move(prov_i);

        auto ours = hash_level(xt, lp, shared_seed, c);

        // Partition [l_i] by most recent live ancestor level.
        std::vector<std::vector<uint32_t>> subsets;
        std::vector<uint64_t> caps;
        size_t covered = 0;
        for (unsigned anc = 1; anc < i; ++anc) {
            std::vector<uint32_t> s;
            for (size_t j = 0; j < lp.block_count; ++j)
                if (prov[j] == anc) s.push_back(static_cast<uint32_t>(j));
            if (s.empty()) continue;
            covered += s.size();
            caps.push_back(params.bound_for_gap(i - anc));
            subsets.push_back(std::move(s));
        }
        // Partition invariant: disjoint by construction (one provenance per
        // block) and covering.
        assert(covered == lp.block_count);
        if (covered != lp.block_count) return std::nullopt;

        // Recover this level's hash vector plane by plane.
        auto seg = sketch.find(SegmentTag::LevelSketch, static_cast<uint16_t>(i));
        auto g = random_bipartite(static_cast<uint32_t>(lp.block_count),
                                  static_cast<uint32_t>(plan.expander.m),
                                  plan.expander.d, level_graph_seed(shared_seed, i));
        size_t par_bytes = (plan.expander.m + 7) / 8;
        size_t red_bytes = serialized_symbols_size(plan.rs_width, 2 * plan.rs_errors);
        if (seg.payload.size() != c * (par_bytes + red_bytes))
            throw std::invalid_argument("bob_edit_recover: level segment size mismatch");

        std::vector<uint16_t> v(lp.block_count, 0);
        size_t at = 0;
        for (unsigned plane = 0; plane < c; ++plane) {
            std::vector<uint8_t> par(seg.payload.begin() + at,
                                     seg.payload.begin() + at + par_bytes);
            at += par_bytes;
            std::vector<uint8_t> red(seg.payload.begin() + at,
                                     seg.payload.begin() + at + red_bytes);
            at += red_bytes;
            auto recovered = special_decode(
                extract_plane(ours, plane), BitString::from_bytes(par, plan.expander.m),
                parse_symbols(red), plan, g, subsets, caps);
            if (!recovered) return std::nullopt;
            for (size_t j = 0; j < lp.block_count; ++j)
                if (recovered->get(j)) v[j] |= static_cast<uint16_t>(1u << plane);
        }

        // Detected-bad blocks: re-root and refill from y.
        std::vector<size_t> bad;
        std::vector<uint16_t> targets;
        for (size_t j = 0; j < lp.block_count; ++j)
            if (v[j] != ours[j]) {
                bad.push_back(j);
                targets.push_back(v[j]);
            }
        if (bad.size() > 6 * k) return std::nullopt;  // abort rather than corrupt
        for (size_t j : bad) prov[j] = i;

        auto w = dp_match(bad, targets, lp.block_size, y, k, shared_seed, i, c);
        for (auto& [posx, posy] : w.pairs)
            xt.write_slice(posx, y.slice_padded(posy, lp.block_size), lp.block_size);
    }

    // Final stage: systematic correction of the last level's blocks.
    const auto& lpL = params.level[params.levels - 1];
    auto seg = sketch.find(SegmentTag::Final, static_cast<uint16_t>(params.levels));
    auto corrected = rs_correct(blocks_to_symbols(xt, lpL, params.final_width),
                                parse_symbols(seg.payload), params.final_errors);
    if (!corrected) return std::nullopt;
    for (size_t j = 0; j < lpL.block_count; ++j) {
        BitString block(lpL.block_size);
        for (size_t b = 0; b < lpL.block_size; ++b)
            if ((corrected->symbols[j] >> b) & 1) block.set(b, true);
        xt.write_slice(j * lpL.block_size, block, lpL.block_size);
    }
    return xt;
}

BitString edit_adversary(const BitString& x, uint64_t k, EditStyle style,
                         RngStream& rng) {
    if (k > x.size()) throw std::invalid_argument("edit_adversary: k > |x|");
    std::vector<uint8_t> bits(x.size());
    for (size_t i = 0; i < x.size(); ++i) bits[i] = x.get(i);

    // Cluster centers for the clustered style; prefix edits stay near the
    // front.
    std::vector<size_t> centers;
    size_t ncenters = std::max<uint64_t>(1, k / 8);
    for (size_t i = 0; i < ncenters; ++i)
        centers.push_back(rng.next_below(std::max<size_t>(1, x.size())));

    for (uint64_t op = 0; op < k; ++op) {
        size_t len = bits.size();
        size_t pos;
        switch (style) {
            case EditStyle::Random:
                pos = rng.next_below(len + 1);
                break;
            case EditStyle::Clustered: {
                size_t center = centers[rng.next_below(centers.size())];
                size_t spread = 32;
                size_t lo = center > spread ? center - spread : 0;
                size_t hi = std::min(center + spread, len);
                pos = lo + rng.next_below(hi - lo + 1);
                break;
            }
            case EditStyle::Prefix: {
                size_t window = std::min<size_t>(len + 1, 4 * k + 1);
                pos = rng.next_below(window);
                break;
            }
        }
        pos = std::min(pos, bits.size());
        unsigned kind = static_cast<unsigned>(rng.next_below(3));
        if (bits.empty()) kind = 0;  // can only insert
        if (kind == 0) {  // insert
            bits.insert(bits.begin() + pos, rng.next_bool() ? 1 : 0);
        } else if (kind == 1) {  // delete
            if (pos >= bits.size()) pos = bits.size() - 1;
            bits.erase(bits.begin() + pos);
        } else {  // substitute
            if (pos >= bits.size()) pos = bits.size() - 1;
            bits[pos] ^= 1;
        }
    }

    BitString y(bits.size());
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) y.set(i, true);
    if (!edit_distance_at_most(x, y, k))
        throw std::logic_error("edit_adversary: script exceeded its own budget");
    return y;
}

}  // namespace ade
