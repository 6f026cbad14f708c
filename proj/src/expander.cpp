#include "ade/expander.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace ade {

std::vector<std::vector<uint32_t>> BipartiteGraph::reverse_adjacency() const {
    std::vector<std::vector<uint32_t>> rev(m_right);
    for (uint32_t v = 0; v < n_left; ++v)
        for (uint32_t c : row(v)) rev[c].push_back(v);
    return rev;
}

void BipartiteGraph::dump(std::ostream& os) const {
    os << n_left << ' ' << m_right << ' ' << d << '\n';
    for (uint32_t v = 0; v < n_left; ++v) {
        auto r = row(v);
        for (uint32_t j = 0; j < d; ++j) os << r[j] << (j + 1 == d ? '\n' : ' ');
    }
}

BipartiteGraph BipartiteGraph::load(std::istream& is) {
    BipartiteGraph g;
    if (!(is >> g.n_left >> g.m_right >> g.d))
        throw std::runtime_error("BipartiteGraph::load: bad header");
    g.edges.resize(static_cast<size_t>(g.n_left) * g.d);
    for (auto& e : g.edges)
        if (!(is >> e) || e >= g.m_right)
            throw std::runtime_error("BipartiteGraph::load: bad edge");
    return g;
}

BipartiteGraph random_bipartite(uint32_t n, uint32_t m, uint32_t d, RngStream& rng) {
    if (n < 1 || m < 1 || d < 1)
        throw std::invalid_argument("random_bipartite: n, m, d must be >= 1");
    BipartiteGraph g;
    g.n_left = n;
    g.m_right = m;
    g.d = d;
    g.edges.resize(static_cast<size_t>(n) * d);
    for (auto& e : g.edges) e = static_cast<uint32_t>(rng.next_below(m));
    return g;
}

ExpanderPlan plan_one_set(uint64_t s, uint64_t k, PlanMode mode,
                          const PlanConstants& consts) {
    if (k < 1 || k > s) throw std::invalid_argument("plan_one_set: need 1 <= k <= s");
    double log_ratio = std::log2(2.0 * static_cast<double>(s) / static_cast<double>(k));
    ExpanderPlan plan;
    plan.mode = mode;
    if (mode == PlanMode::Tuned) {
        plan.d = static_cast<uint32_t>(
            std::max<double>(4.0, std::ceil(consts.c_d * log_ratio)));
        plan.m = static_cast<uint64_t>(std::ceil(consts.c_m * plan.d * static_cast<double>(k)));
    } else {
        plan.delta = 0.1;
        plan.d = static_cast<uint32_t>(
            std::max<double>(std::ceil(1.0 / plan.delta), std::ceil(log_ratio)));
        plan.m = static_cast<uint64_t>(
            2.0 * plan.d * static_cast<double>(k) * std::exp2(1.0 / plan.delta));
    }
    if (plan.m < plan.d) plan.m = plan.d;
    return plan;
}

ExpanderPlan plan_special(uint64_t k, double delta, const PlanConstants& consts) {
    if (k < 1) throw std::invalid_argument("plan_special: need k >= 1");
    ExpanderPlan plan;
    plan.mode = PlanMode::Tuned;
    plan.delta = delta;
    plan.d = 10;
    plan.m = static_cast<uint64_t>(std::ceil(consts.c_s * plan.d * static_cast<double>(k)));
    if (plan.m < plan.d) plan.m = plan.d;
    return plan;
}

namespace {

constexpr double kEnumerationBudget = 1e7;

double log_choose(size_t n, size_t r) {
    if (r > n) return 0.0;
    return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(r) + 1) -
           std::lgamma(static_cast<double>(n - r) + 1);
}

// Incremental distinct-neighbourhood tracker: coverage[c] counts edges from
// the current R into check c; `distinct` counts nonzero entries.
struct NeighbourhoodCounter {
    explicit NeighbourhoodCounter(const BipartiteGraph& g)
        : graph(g), coverage(g.m_right, 0) {}

    void add(uint32_t v) {
        for (uint32_t c : graph.row(v))
            if (coverage[c]++ == 0) ++distinct;
    }
    void remove(uint32_t v) {
        for (uint32_t c : graph.row(v))
            if (--coverage[c] == 0) --distinct;
    }

    const BipartiteGraph& graph;
    std::vector<uint32_t> coverage;
    size_t distinct = 0;
};

struct RestrictedEnumerator {
    const std::vector<uint32_t>& members;      // flattened union, sorted
    const std::vector<uint32_t>& subset_of;    // parallel: which subset
    std::vector<uint64_t> remaining;           // per-subset cap remaining
    NeighbourhoodCounter counter;
    size_t r_lo, r_hi;
    double alpha;
    bool ok = true;

    RestrictedEnumerator(const BipartiteGraph& g, const std::vector<uint32_t>& mem,
                         const std::vector<uint32_t>& sub, std::vector<uint64_t> caps,
                         size_t lo, size_t hi, double a)
        : members(mem), subset_of(sub), remaining(std::move(caps)), counter(g),
          r_lo(lo), r_hi(hi), alpha(a) {}

    void recurse(size_t next, size_t chosen) {
        if (!ok) return;
        if (chosen >= r_lo &&
            static_cast<double>(counter.distinct) <= alpha * static_cast<double>(chosen)) {
            ok = false;
            return;
        }
        if (chosen == r_hi || next == members.size()) return;
        // Prune: not enough members left to ever reach r_lo.
        if (chosen + (members.size() - next) < r_lo) return;
        for (size_t i = next; i < members.size(); ++i) {
            uint32_t sub = subset_of[i];
            if (remaining[sub] == 0) continue;
            --remaining[sub];
            counter.add(members[i]);
            recurse(i + 1, chosen + 1);
            counter.remove(members[i]);
            ++remaining[sub];
            if (!ok) return;
        }
    }
};

}  // namespace

bool verify_expansion_exact(const BipartiteGraph& g, std::span<const uint32_t> S,
                            size_t r_lo, size_t r_hi, double alpha) {
    std::vector<std::vector<uint32_t>> one = {std::vector<uint32_t>(S.begin(), S.end())};
    return verify_expansion_restricted(g, one, {S.size()}, r_lo, r_hi, alpha);
}

bool verify_expansion_restricted(const BipartiteGraph& g,
                                 const std::vector<std::vector<uint32_t>>& subsets,
                                 const std::vector<uint64_t>& caps, size_t r_lo,
                                 size_t r_hi, double alpha) {
    if (subsets.size() != caps.size())
        throw std::invalid_argument("verify_expansion_restricted: caps mismatch");
    std::vector<uint32_t> members, subset_of;
    for (size_t i = 0; i < subsets.size(); ++i)
        for (uint32_t v : subsets[i]) {
            if (v >= g.n_left)
                throw std::invalid_argument("verify_expansion_restricted: vertex out of range");
            members.push_back(v);
            subset_of.push_back(static_cast<uint32_t>(i));
        }
    r_hi = std::min(r_hi, members.size());
    if (r_lo > r_hi) return true;
    if (log_choose(members.size(), r_hi) > std::log(kEnumerationBudget))
        throw std::invalid_argument("verify_expansion: enumeration budget exceeded");

    RestrictedEnumerator e(g, members, subset_of, caps, r_lo, r_hi, alpha);
    e.recurse(0, 0);
    return e.ok;
}

}  // namespace ade
