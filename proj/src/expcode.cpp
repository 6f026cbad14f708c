#include "ade/expcode.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace ade {

BitString encode_parities(const BitString& x, const BipartiteGraph& g) {
    if (x.size() != g.n_left)
        throw std::invalid_argument("encode_parities: length mismatch");
    BitString z(g.m_right);
    for (uint32_t v = 0; v < g.n_left; ++v) {
        if (!x.get(v)) continue;
        for (uint32_t c : g.row(v)) z.flip(c);
    }
    return z;
}

ParityState::ParityState(const BipartiteGraph& g, const BitString& z, BitString x0,
                         const std::vector<uint32_t>& eligible)
    : graph_(g), reverse_(g.reverse_adjacency()), reverse_odd_(g.m_right),
      x_(std::move(x0)), unsat_(g.m_right, 0), counters_(g.n_left, 0),
      odd_counters_(g.n_left, 0), odd_degree_(g.n_left, 0), eligible_(g.n_left, 0) {
    if (x_.size() != g.n_left || z.size() != g.m_right)
        throw std::invalid_argument("ParityState: size mismatch");

    // Odd-multiplicity view of each row: checks whose parity actually toggles
    // when the vertex flips.
    std::vector<uint32_t> sorted;
    for (uint32_t v = 0; v < g.n_left; ++v) {
        auto r = g.row(v);
        sorted.assign(r.begin(), r.end());
        std::sort(sorted.begin(), sorted.end());
        for (size_t i = 0; i < sorted.size();) {
            size_t j = i;
            while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
            if ((j - i) & 1) {
                reverse_odd_[sorted[i]].push_back(v);
                ++odd_degree_[v];
            }
            i = j;
        }
    }

    BitString parity = encode_parities(x_, g);
    for (uint32_t c = 0; c < g.m_right; ++c) {
        if (parity.get(c) == z.get(c)) continue;
        unsat_[c] = 1;
        ++total_unsat_;
        for (uint32_t u : reverse_[c]) ++counters_[u];
        for (uint32_t u : reverse_odd_[c]) ++odd_counters_[u];
    }
    for (uint32_t v : eligible) eligible_[v] = 1;
    for (uint32_t v : eligible)
        if (is_candidate(v)) candidates_.insert(v);
}

int ParityState::flip(uint32_t v) {
    x_.flip(v);
    int delta = 0;
    // reverse_odd_ rows index v once per odd check, so iterating the odd view
    // of v's row visits each toggling check exactly once.
    thread_local std::vector<uint32_t> toggled;
    toggled.clear();
    {
        auto r = graph_.row(v);
        thread_local std::vector<uint32_t> sorted;
        sorted.assign(r.begin(), r.end());
        std::sort(sorted.begin(), sorted.end());
        for (size_t i = 0; i < sorted.size();) {
            size_t j = i;
            while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
            if ((j - i) & 1) toggled.push_back(sorted[i]);
            i = j;
        }
    }
    for (uint32_t c : toggled) {
        int dir = unsat_[c] ? -1 : +1;
        unsat_[c] ^= 1;
        total_unsat_ += dir;
        delta += dir;
        for (uint32_t u : reverse_[c]) counters_[u] += dir;
        for (uint32_t u : reverse_odd_[c]) {
            odd_counters_[u] += dir;
            if (eligible_[u]) {
                if (is_candidate(u)) candidates_.insert(u);
                else candidates_.erase(u);
            }
        }
    }
    // The multiplicity counter can change for vertices whose odd counter did
    // not; refresh candidacy for those too.
    for (uint32_t c : toggled)
        for (uint32_t u : reverse_[c])
            if (eligible_[u]) {
                if (is_candidate(u)) candidates_.insert(u);
                else candidates_.erase(u);
            }
    return delta;
}

std::pair<size_t, size_t> ParityState::unsatisfied_profile() const {
    size_t mx = 0;
    for (uint32_t c : counters_) mx = std::max<size_t>(mx, c);
    return {total_unsat_, mx};
}

bool ParityState::counters_consistent() const {
    std::vector<uint32_t> fresh(graph_.n_left, 0), fresh_odd(graph_.n_left, 0);
    size_t total = 0;
    for (uint32_t c = 0; c < graph_.m_right; ++c) {
        if (!unsat_[c]) continue;
        ++total;
        for (uint32_t l : reverse_[c]) ++fresh[l];
        for (uint32_t l : reverse_odd_[c]) ++fresh_odd[l];
    }
    return total == total_unsat_ && fresh == counters_ && fresh_odd == odd_counters_;
}

namespace {

// Shared decode loop. pick() returns the vertex to flip or UINT32_MAX for
// fixpoint; after() runs once per completed flip.
template <typename Pick, typename After>
DecodeOutcome run_decode(ParityState& state, size_t max_flips, Pick pick, After after) {
    DecodeOutcome out;
    size_t cap = max_flips ? max_flips : std::max<size_t>(state.total_unsatisfied(), 1);
    while (true) {
        uint32_t v = pick(state);
        if (v == UINT32_MAX) {
            out.fixpoint = true;
            break;
        }
        if (out.flips >= cap) break;  // decode-incomplete
        size_t before = state.total_unsatisfied();
        state.flip(v);
        assert(state.total_unsatisfied() < before);
        (void)before;
        ++out.flips;
        after(state, v);
#ifndef NDEBUG
        if ((out.flips & 63) == 0) assert(state.counters_consistent());
#endif
    }
    out.unsatisfied = state.total_unsatisfied();
    out.result = state.take();
    return out;
}

}  // namespace

DecodeOutcome bp_decode_restricted(const BitString& y, const BitString& z,
                                   const BipartiteGraph& g,
                                   std::span<const uint32_t> allowed,
                                   size_t max_flips) {
    std::vector<uint32_t> eligible(allowed.begin(), allowed.end());
    ParityState state(g, z, y, eligible);
    return run_decode(
        state, max_flips,
        [](ParityState& s) -> uint32_t {
            return s.candidates().empty() ? UINT32_MAX : *s.candidates().begin();
        },
        [](ParityState&, uint32_t) {});
}

DecodeOutcome bp_decode_budgeted(const BitString& y, const BitString& z,
                                 const BipartiteGraph& g,
                                 const std::vector<std::vector<uint32_t>>& subsets,
                                 const std::vector<uint64_t>& bounds) {
    if (subsets.size() != bounds.size())
        throw std::invalid_argument("bp_decode_budgeted: bounds mismatch");

    std::vector<uint32_t> subset_of(g.n_left, UINT32_MAX);
    std::vector<uint32_t> eligible;
    for (size_t i = 0; i < subsets.size(); ++i)
        for (uint32_t v : subsets[i]) {
            if (subset_of[v] != UINT32_MAX)
                throw std::invalid_argument("bp_decode_budgeted: subsets overlap");
            subset_of[v] = static_cast<uint32_t>(i);
            eligible.push_back(v);
        }

    std::vector<uint8_t> net_flipped(g.n_left, 0);
    std::vector<uint64_t> net_count(subsets.size(), 0);

    ParityState state(g, z, y, eligible);
    // V membership under the 19k_i rule, evaluated against live counts on
    // every pick — equivalent to recomputing V from scratch each iteration.
    auto in_restriction = [&](uint32_t v) {
        uint32_t i = subset_of[v];
        return net_count[i] < 19 * bounds[i] || net_flipped[v];
    };
    return run_decode(
        state, state.total_unsatisfied(),
        [&](ParityState& s) -> uint32_t {
            for (uint32_t v : s.candidates())
                if (in_restriction(v)) return v;
            return UINT32_MAX;
        },
        [&](ParityState&, uint32_t v) {
            uint32_t i = subset_of[v];
            if (net_flipped[v]) {
                net_flipped[v] = 0;
                --net_count[i];
            } else {
                net_flipped[v] = 1;
                ++net_count[i];
            }
            assert(net_count[i] <= 20 * bounds[i]);
        });
}

}  // namespace ade
