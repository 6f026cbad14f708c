#include "ade/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace ade {

using boost::multiprecision::cpp_int;

BitString apply_errors(const BitString& x, const ErrorPattern& p) {
    BitString out = x;
    for (uint32_t i : p.flips) {
        if (i >= x.size()) throw std::out_of_range("apply_errors: index out of range");
        out.flip(i);
    }
    return out;
}

SubsetSpec SubsetSpec::make(uint64_t n, std::vector<uint64_t> sizes,
                            std::vector<uint64_t> bounds,
                            std::optional<std::vector<std::vector<uint32_t>>> subsets) {
    if (sizes.empty() || sizes.size() != bounds.size())
        throw std::invalid_argument("SubsetSpec: need t >= 1 with matching sizes/bounds");
    if (subsets && subsets->size() != sizes.size())
        throw std::invalid_argument("SubsetSpec: subset count mismatch");

    size_t t = sizes.size();
    std::vector<size_t> order(t);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return bounds[a] > bounds[b]; });

    SubsetSpec spec;
    spec.n = n;
    spec.sizes.reserve(t);
    spec.bounds.reserve(t);
    if (subsets) spec.subsets.emplace();
    spec.valid_ratio = true;
    for (size_t idx : order) {
        uint64_t s = sizes[idx], k = bounds[idx];
        if (k < 1 || k > s || s > n)
            throw std::invalid_argument("SubsetSpec: need 1 <= k_i <= s_i <= n");
        if (s < 2 * k) spec.valid_ratio = false;
        spec.sizes.push_back(s);
        spec.bounds.push_back(k);
        if (subsets) spec.subsets->push_back((*subsets)[idx]);
    }

    if (spec.subsets) {
        std::vector<bool> seen(n, false);
        for (size_t i = 0; i < t; ++i) {
            auto& set = (*spec.subsets)[i];
            std::sort(set.begin(), set.end());
            if (set.size() != spec.sizes[i])
                throw std::invalid_argument("SubsetSpec: |S_i| != s_i");
            for (uint32_t v : set) {
                if (v >= n || seen[v])
                    throw std::invalid_argument("SubsetSpec: subsets not disjoint in [n]");
                seen[v] = true;
            }
        }
    }
    return spec;
}

uint64_t SubsetSpec::total_size() const {
    return std::accumulate(sizes.begin(), sizes.end(), uint64_t{0});
}

uint64_t SubsetSpec::total_bound() const {
    return std::accumulate(bounds.begin(), bounds.end(), uint64_t{0});
}

namespace {

constexpr uint64_t kExactBinomialLimit = uint64_t{1} << 20;

double log2_cpp_int(const cpp_int& v) {
    size_t bits = msb(v);  // index of highest set bit
    if (bits <= 62) return std::log2(static_cast<double>(v.convert_to<uint64_t>()));
    cpp_int top = v >> (bits - 62);
    return std::log2(top.convert_to<double>()) + static_cast<double>(bits - 62);
}

double log2_binomial_stirling(uint64_t s, uint64_t j) {
    if (j == 0 || j == s) return 0.0;
    double ls = std::lgamma(static_cast<double>(s) + 1.0);
    double lj = std::lgamma(static_cast<double>(j) + 1.0);
    double lsj = std::lgamma(static_cast<double>(s - j) + 1.0);
    return (ls - lj - lsj) / std::log(2.0);
}

double log2_binomial_sum(uint64_t s, uint64_t k) {
    if (k > s) throw std::invalid_argument("entropy_H: k_i > s_i");
    if (s <= kExactBinomialLimit) {
        cpp_int sum = 1, term = 1;
        for (uint64_t j = 0; j < k; ++j) {
            term = term * (s - j) / (j + 1);
            sum += term;
        }
        return log2_cpp_int(sum);
    }
    // Terms increase up to j = min(k, s/2); accumulate from the dominant end
    // until additions stop mattering.
    uint64_t jmax = std::min<uint64_t>(k, s / 2);
    double mx = log2_binomial_stirling(s, jmax);
    double acc = 0.0;
    for (uint64_t j = k + 1; j-- > 0;) {
        double term = std::exp2(log2_binomial_stirling(s, j) - mx);
        acc += term;
        if (term < 1e-18 * acc && j < jmax) break;
    }
    return mx + std::log2(acc);
}

}  // namespace

double entropy_H(const std::vector<uint64_t>& sizes, const std::vector<uint64_t>& bounds) {
    if (sizes.size() != bounds.size())
        throw std::invalid_argument("entropy_H: length mismatch");
    double h = 0.0;
    for (size_t i = 0; i < sizes.size(); ++i) h += log2_binomial_sum(sizes[i], bounds[i]);
    return h;
}

double entropy_H1(uint64_t s, uint64_t k) { return log2_binomial_sum(s, k); }

namespace {

// True iff s >= k * 2^e, without materializing 2^e.
bool at_least_pow2(uint64_t s, uint64_t k, uint64_t e) {
    if (e >= 127) return false;
    unsigned __int128 lhs = static_cast<unsigned __int128>(k) << static_cast<unsigned>(e);
    return static_cast<unsigned __int128>(s) >= lhs;
}

}  // namespace

unsigned chi(const std::vector<uint64_t>& sizes, const std::vector<uint64_t>& bounds,
             unsigned base) {
    if (base < 2) throw std::invalid_argument("chi: base must be >= 2");
    if (sizes.size() != bounds.size()) throw std::invalid_argument("chi: length mismatch");
    std::vector<unsigned> occupied;
    for (size_t i = 0; i < sizes.size(); ++i) {
        uint64_t s = sizes[i], k = bounds[i];
        if (k == 0 || s < 2 * k) throw std::invalid_argument("chi: ratio below 2");
        // Find j >= 1 with base^(j-1) <= log2(s/k) < base^j.
        unsigned j = 1;
        uint64_t e_hi = base;  // base^j
        while (at_least_pow2(s, k, e_hi)) {
            ++j;
            if (e_hi > (uint64_t{1} << 40)) break;  // ratio cannot reach further bands
            e_hi *= base;
        }
        occupied.push_back(j);
    }
    std::sort(occupied.begin(), occupied.end());
    occupied.erase(std::unique(occupied.begin(), occupied.end()), occupied.end());
    return static_cast<unsigned>(occupied.size());
}

namespace {

std::vector<uint32_t> sample_distinct(uint64_t n, size_t count, RngStream& rng) {
    // Partial Fisher-Yates over [n]; positions touched are tracked sparsely.
    std::vector<uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0u);
    std::vector<uint32_t> out(count);
    for (size_t i = 0; i < count; ++i) {
        uint64_t j = i + rng.next_below(n - i);
        std::swap(pool[i], pool[j]);
        out[i] = pool[i];
    }
    return out;
}

}  // namespace

SampledInstance sample_spec_instance(const SubsetSpec& sized_only, Layout layout,
                                     RngStream& rng, bool uniform_counts) {
    uint64_t n = sized_only.n;
    uint64_t total = sized_only.total_size();
    if (total > n) throw std::invalid_argument("sample_spec_instance: sizes exceed n");

    size_t t = sized_only.t();
    std::vector<std::vector<uint32_t>> subsets(t);

    switch (layout) {
        case Layout::Contiguous: {
            uint32_t pos = 0;
            for (size_t i = 0; i < t; ++i) {
                subsets[i].resize(sized_only.sizes[i]);
                std::iota(subsets[i].begin(), subsets[i].end(), pos);
                pos += static_cast<uint32_t>(sized_only.sizes[i]);
            }
            break;
        }
        case Layout::Random: {
            auto flat = sample_distinct(n, total, rng);
            size_t at = 0;
            for (size_t i = 0; i < t; ++i) {
                subsets[i].assign(flat.begin() + at, flat.begin() + at + sized_only.sizes[i]);
                at += sized_only.sizes[i];
            }
            break;
        }
        case Layout::Interleaved: {
            // Round-robin over sets that still want positions.
            std::vector<uint64_t> want(sized_only.sizes.begin(), sized_only.sizes.end());
            uint32_t pos = 0;
            bool any = true;
            while (any) {
                any = false;
                for (size_t i = 0; i < t; ++i) {
                    if (want[i] == 0) continue;
                    subsets[i].push_back(pos++);
                    --want[i];
                    any = true;
                }
            }
            break;
        }
    }

    SubsetSpec with_subsets =
        SubsetSpec::make(n, sized_only.sizes, sized_only.bounds, subsets);

    ErrorPattern errors;
    for (size_t i = 0; i < t; ++i) {
        const auto& set = (*with_subsets.subsets)[i];
        uint64_t count = with_subsets.bounds[i];
        if (uniform_counts) count = rng.next_below(count + 1);
        // Choose `count` distinct members of the subset.
        std::vector<uint32_t> members = set;
        for (uint64_t j = 0; j < count; ++j) {
            uint64_t pick = j + rng.next_below(members.size() - j);
            std::swap(members[j], members[pick]);
            errors.flips.push_back(members[j]);
        }
    }
    std::sort(errors.flips.begin(), errors.flips.end());
    return {std::move(with_subsets), std::move(errors)};
}

std::optional<uint64_t> edit_distance_at_most(const BitString& x, const BitString& y,
                                              uint64_t bound) {
    size_t nx = x.size(), ny = y.size();
    uint64_t diff = nx > ny ? nx - ny : ny - nx;
    if (diff > bound) return std::nullopt;

    // Band of half-width `bound` around the main diagonal, indexed by d = j - i.
    const uint64_t INF = UINT64_MAX / 2;
    int64_t w = static_cast<int64_t>(bound);
    std::vector<uint64_t> prev(2 * bound + 1, INF), cur(2 * bound + 1, INF);
    auto at = [&](std::vector<uint64_t>& row, int64_t d) -> uint64_t& {
        return row[static_cast<size_t>(d + w)];
    };

    for (int64_t d = 0; d <= w && d <= static_cast<int64_t>(ny); ++d)
        at(prev, d) = static_cast<uint64_t>(d);

    for (size_t i = 1; i <= nx; ++i) {
        std::fill(cur.begin(), cur.end(), INF);
        uint64_t row_min = INF;
        for (int64_t d = -w; d <= w; ++d) {
            int64_t j = static_cast<int64_t>(i) + d;
            if (j < 0 || j > static_cast<int64_t>(ny)) continue;
            uint64_t best = INF;
            if (j == 0) {
                best = i;
            } else {
                uint64_t sub = at(prev, d);
                if (sub != INF)
                    best = sub + (x.get(i - 1) == y.get(static_cast<size_t>(j - 1)) ? 0 : 1);
                if (d < w && at(prev, d + 1) != INF)
                    best = std::min(best, at(prev, d + 1) + 1);  // delete x[i-1]
                if (d > -w && at(cur, d - 1) != INF)
                    best = std::min(best, at(cur, d - 1) + 1);  // insert y[j-1]
            }
            at(cur, d) = best;
            row_min = std::min(row_min, best);
        }
        std::swap(prev, cur);
        if (row_min > bound) return std::nullopt;
    }
    int64_t dfin = static_cast<int64_t>(ny) - static_cast<int64_t>(nx);
    uint64_t dist = at(prev, dfin);
    if (dist > bound) return std::nullopt;
    return dist;
}

}  // namespace ade
