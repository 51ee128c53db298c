#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "gwheavy/errors.hpp"

namespace gw {

// A critical offspring law p_0..p_K together with its derived constants.
// Laws are immutable after construction and safe to share across threads.
struct OffspringDistribution {
    std::vector<double> probs;     // p_i, support truncated at K = probs.size()-1
    double mean = 0.0;             // E[xi], must be 1 up to tolerance
    double sigma2 = 0.0;           // E[xi^2] - 1
    std::int64_t span = 0;         // h = gcd{ i > 0 : p_i > 0 }
    double alpha = 0.0;            // h / (sigma * sqrt(2 pi))
    double truncation_mass = 0.0;  // probability mass dropped by truncation
    std::string name;

    std::int64_t max_degree() const { return static_cast<std::int64_t>(probs.size()) - 1; }

    // Distinct degrees with positive mass, ascending.
    std::vector<std::int64_t> support() const {
        std::vector<std::int64_t> s;
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(probs.size()); ++i)
            if (probs[static_cast<std::size_t>(i)] > 0.0) s.push_back(i);
        return s;
    }
};

// Exact distribution of the left-continuous walk S_m = sum of m i.i.d. steps
// (xi - 1). values[k] = P(S_m = offset + k) with offset = -m.
struct WalkPmf {
    std::int64_t m = 0;
    std::int64_t offset = 0;
    std::vector<double> values;

    double prob(std::int64_t s) const {
        const std::int64_t idx = s - offset;
        if (idx < 0 || idx >= static_cast<std::int64_t>(values.size())) return 0.0;
        return values[static_cast<std::size_t>(idx)];
    }

    double total_mass() const {
        double sum = 0.0, c = 0.0;
        for (double v : values) {
            const double y = v - c;
            const double t = sum + y;
            c = (t - sum) - y;
            sum = t;
        }
        return sum;
    }
};

namespace detail {

inline void validate_distribution(OffspringDistribution& dist) {
    double sum = 0.0, mean = 0.0, second = 0.0;
    for (std::size_t i = 0; i < dist.probs.size(); ++i) {
        const double p = dist.probs[i];
        if (p < 0.0) throw ConfigError("offspring weight p_" + std::to_string(i) + " is negative");
        sum += p;
        mean += static_cast<double>(i) * p;
        second += static_cast<double>(i) * static_cast<double>(i) * p;
    }
    if (std::abs(sum - 1.0) > 1e-12 + dist.truncation_mass)
        throw ConfigError("offspring weights sum to " + std::to_string(sum) + ", expected 1");
    if (std::abs(mean - 1.0) > 1e-9)
        throw DomainError("offspring law is not critical: mean = " + std::to_string(mean));
    const double sigma2 = second - 1.0;
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw DomainError("offspring law is degenerate: sigma^2 = " + std::to_string(sigma2));

    std::int64_t h = 0;
    for (std::size_t i = 1; i < dist.probs.size(); ++i)
        if (dist.probs[i] > 0.0) h = std::gcd(h, static_cast<std::int64_t>(i));

    dist.mean = mean;
    dist.sigma2 = sigma2;
    dist.span = h;
    dist.alpha = static_cast<double>(h) / (std::sqrt(sigma2) * std::sqrt(2.0 * M_PI));
}

}  // namespace detail

// General constructor from explicit weights. Validates criticality
// (|mean - 1| <= 1e-9, so exact rationals survive decimal input) and
// positive finite variance, then fills in span and alpha.
inline OffspringDistribution from_weights(std::vector<double> probs, std::string name = "custom") {
    if (probs.empty()) throw ConfigError("offspring law needs at least one weight");
    while (probs.size() > 1 && probs.back() == 0.0) probs.pop_back();
    OffspringDistribution dist;
    dist.probs = std::move(probs);
    dist.name = std::move(name);
    detail::validate_distribution(dist);
    return dist;
}

// The canonical laws used throughout: catalan (binary trees), full_binary,
// poisson1 (Cayley trees, truncated), apollonian_ternary (uniform ternary
// trees dual to Apollonian networks).
inline OffspringDistribution make_named(const std::string& name) {
    if (name == "catalan") return from_weights({0.25, 0.5, 0.25}, name);
    if (name == "full_binary") return from_weights({0.5, 0.0, 0.5}, name);
    if (name == "apollonian_ternary") return from_weights({2.0 / 3.0, 0.0, 0.0, 1.0 / 3.0}, name);
    if (name == "poisson1") {
        // Poisson(1) truncated at K = 64 without renormalization; the
        // residual mass (< 1e-89) is far below every tolerance in use.
        constexpr int kCut = 64;
        std::vector<double> probs(kCut + 1);
        double p = std::exp(-1.0);
        double tail = 1.0;
        for (int i = 0; i <= kCut; ++i) {
            probs[static_cast<std::size_t>(i)] = p;
            tail -= p;
            p /= static_cast<double>(i + 1);
        }
        OffspringDistribution dist;
        dist.probs = std::move(probs);
        dist.name = name;
        dist.truncation_mass = std::max(tail, 0.0);
        detail::validate_distribution(dist);
        return dist;
    }
    throw ConfigError("unknown offspring law '" + name +
                      "'; expected one of catalan, full_binary, poisson1, apollonian_ternary");
}

// The size-biased law (i p_i)_{i >= 0}; sums to the mean, i.e. to 1.
inline std::vector<double> size_biased(const OffspringDistribution& dist) {
    std::vector<double> b(dist.probs.size());
    for (std::size_t i = 0; i < dist.probs.size(); ++i) b[i] = static_cast<double>(i) * dist.probs[i];
    return b;
}

// Exact pmf of S_m by schoolbook convolution, O(m^2 K). The gather form
// with compensated inner sums keeps every cell a correctly ordered sum of
// non-negative terms.
inline WalkPmf walk_pmf(const OffspringDistribution& dist, std::int64_t m,
                        std::int64_t guard = 10000) {
    if (m < 0) throw DomainError("walk_pmf: negative step count");
    if (m > guard)
        throw ResourceError("walk_pmf: m = " + std::to_string(m) + " exceeds the guard " +
                            std::to_string(guard) + " (raise the guard to override)");
    const std::int64_t maxdeg = dist.max_degree();
    WalkPmf pmf;
    pmf.m = m;
    pmf.offset = -m;
    std::vector<double> cur{1.0};  // S_0 = 0
    std::vector<double> next;
    for (std::int64_t step = 1; step <= m; ++step) {
        // after `step` steps the support is [-step, step*(maxdeg-1)]
        next.assign(static_cast<std::size_t>(step * maxdeg + 1), 0.0);
        const std::int64_t prev_cells = static_cast<std::int64_t>(cur.size());
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(next.size()); ++t) {
            // value at cell t is t - step; the step by degree i shifts the
            // previous offset by one, so the source cell is t - i
            double sum = 0.0, c = 0.0;
            for (std::int64_t i = 0; i <= maxdeg; ++i) {
                const std::int64_t src = t - i;
                if (src < 0 || src >= prev_cells) continue;
                const double term = cur[static_cast<std::size_t>(src)] * dist.probs[static_cast<std::size_t>(i)];
                const double y = term - c;
                const double tt = sum + y;
                c = (tt - sum) - y;
                sum = tt;
            }
            next[static_cast<std::size_t>(t)] = sum;
        }
        cur.swap(next);
    }
    pmf.values = std::move(cur);
    return pmf;
}

// Dwass identity: P(|T| = n) = P(S_n = -1) / n.
inline double gw_total_size_pmf(const OffspringDistribution& dist, std::int64_t n,
                                std::int64_t guard = 10000) {
    if (n < 1) throw DomainError("gw_total_size_pmf: n must be >= 1");
    return walk_pmf(dist, n, guard).prob(-1) / static_cast<double>(n);
}

// Forest version: P(|T_1| + ... + |T_k| = n) = (k/n) P(S_n = -k).
inline double forest_size_pmf(const OffspringDistribution& dist, std::int64_t k, std::int64_t n,
                              std::int64_t guard = 10000) {
    if (k < 1 || n < k) throw DomainError("forest_size_pmf: need 1 <= k <= n");
    return static_cast<double>(k) / static_cast<double>(n) * walk_pmf(dist, n, guard).prob(-k);
}

// Membership sieve for I = { n >= 1 : P(S_n = -1) > 0 } on [1, nmax].
// P(S_n = -1) > 0 exactly when n - 1 is a non-negative integer combination
// of the positive support (any such degree multiset leaves room for at
// least one leaf), so a semigroup reachability sieve is exact.
inline std::vector<char> size_support_mask(const OffspringDistribution& dist, std::int64_t nmax) {
    if (nmax < 1) throw DomainError("size_support: nmax must be >= 1");
    std::vector<std::int64_t> pos;
    for (std::int64_t j : dist.support())
        if (j > 0) pos.push_back(j);
    std::vector<char> reach(static_cast<std::size_t>(nmax), 0);
    reach[0] = 1;  // reach[s] <=> s = n-1 attainable
    for (std::int64_t s = 1; s < nmax; ++s)
        for (std::int64_t j : pos)
            if (j <= s && reach[static_cast<std::size_t>(s - j)]) {
                reach[static_cast<std::size_t>(s)] = 1;
                break;
            }
    return reach;  // index n-1 for size n
}

inline std::vector<std::int64_t> size_support(const OffspringDistribution& dist, std::int64_t nmax) {
    const auto mask = size_support_mask(dist, nmax);
    std::vector<std::int64_t> sizes;
    for (std::int64_t n = 1; n <= nmax; ++n)
        if (mask[static_cast<std::size_t>(n - 1)]) sizes.push_back(n);
    return sizes;
}

inline bool size_in_support(const OffspringDistribution& dist, std::int64_t n) {
    if (n < 1) return false;
    return size_support_mask(dist, n).back() != 0;
}

// Nearest members of I around n, for error messages.
inline std::vector<std::int64_t> nearest_support_sizes(const OffspringDistribution& dist,
                                                       std::int64_t n, int count = 2) {
    const std::int64_t lookahead = n + std::max<std::int64_t>(dist.span, 1) * (count + 2) + 2;
    const auto mask = size_support_mask(dist, lookahead);
    std::vector<std::int64_t> out;
    for (std::int64_t lo = n - 1; lo >= 1 && static_cast<int>(out.size()) < count; --lo)
        if (mask[static_cast<std::size_t>(lo - 1)]) out.push_back(lo);
    std::reverse(out.begin(), out.end());
    for (std::int64_t hi = n + 1; hi <= lookahead && static_cast<int>(out.size()) < 2 * count; ++hi)
        if (mask[static_cast<std::size_t>(hi - 1)]) out.push_back(hi);
    return out;
}

inline DomainError size_not_in_support_error(const OffspringDistribution& dist, std::int64_t n) {
    std::string msg = "n = " + std::to_string(n) + " is not a reachable tree size for '" +
                      dist.name + "'; nearest valid sizes:";
    for (std::int64_t s : nearest_support_sizes(dist, n)) msg += " " + std::to_string(s);
    return DomainError(msg);
}

struct ZkMoments {
    double mean = 0.0;
    double second_factorial = 0.0;  // E[Z_k (Z_k - 1)]
};

// Exact fringe-count moments of Z_k = #{v : N(v) = k} in the size-n tree:
//   E[Z_k]          = n P(S_k = -1) P(S_{n-k} = 0) / (k P(S_n = -1))
//   E[Z_k (Z_k-1)]  = n (n-2k+1) P(S_k = -1)^2 P(S_{n-2k} = 1) / (k^2 P(S_n = -1))
// with the second factorial moment vanishing for k > (n-1)/2. Evaluated as
// ratios of same-scale probabilities so nothing underflows.
inline ZkMoments expected_zk(const OffspringDistribution& dist, std::int64_t n, std::int64_t k,
                             std::int64_t guard = 10000) {
    if (k < 1 || k > n) throw DomainError("expected_zk: need 1 <= k <= n");
    const double p_n = walk_pmf(dist, n, guard).prob(-1);
    if (p_n <= 0.0) throw size_not_in_support_error(dist, n);
    const double p_k = walk_pmf(dist, k, guard).prob(-1);
    const double p_nk = walk_pmf(dist, n - k, guard).prob(0);

    ZkMoments out;
    out.mean = static_cast<double>(n) / static_cast<double>(k) * p_k * (p_nk / p_n);
    if (2 * k <= n - 1) {
        const double p_n2k = walk_pmf(dist, n - 2 * k, guard).prob(1);
        out.second_factorial = static_cast<double>(n) / static_cast<double>(k) *
                               static_cast<double>(n - 2 * k + 1) / static_cast<double>(k) * p_k *
                               (p_k * p_n2k / p_n);
    }
    return out;
}

}  // namespace gw
