#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gwheavy/errors.hpp"
#include "gwheavy/heavy.hpp"
#include "gwheavy/offspring.hpp"
#include "gwheavy/tree.hpp"

namespace gw {

// Brute-force enumeration of every weighted ordered tree of size n: all
// degree sequences that satisfy the Lukasiewicz constraints, weight
// prod_i p_{xi_i}, zero-weight sequences skipped. Deliberately simple; the
// guard keeps Catalan-type growth in check.
inline void enumerate_trees(const OffspringDistribution& dist, std::int64_t n,
                            const std::function<void(const OrderedTree&, double)>& visit,
                            std::int64_t guard = 16) {
    if (n < 1) throw DomainError("enumerate_trees: n must be >= 1");
    if (n > guard)
        throw ResourceError("enumerate_trees: n = " + std::to_string(n) + " exceeds the guard " +
                            std::to_string(guard));
    const auto support = dist.support();
    std::vector<NodeIndex> degrees(static_cast<std::size_t>(n));

    // open = pending subtrees after placing `pos` degrees
    std::function<void(std::int64_t, std::int64_t, double)> rec =
        [&](std::int64_t pos, std::int64_t open, double weight) {
            if (pos == n) {
                visit(from_degrees(degrees), weight);
                return;
            }
            const std::int64_t remaining = n - pos;
            for (std::int64_t deg : support) {
                const std::int64_t next_open = open + deg - 1;
                if (next_open < (pos + 1 == n ? 0 : 1)) continue;
                if (next_open > remaining - 1) continue;
                degrees[static_cast<std::size_t>(pos)] = static_cast<NodeIndex>(deg);
                rec(pos + 1, next_open, weight * dist.probs[static_cast<std::size_t>(deg)]);
            }
        };
    rec(0, 1, 1.0);
}

// Exact conditional law of one statistic under the size-n tree.
struct ExactDistribution {
    std::vector<std::int64_t> support;
    std::vector<double> probs;
    double total = 0.0;  // conditioning mass P(|T| = n)
};

// The statistics the oracle can evaluate; k parametrizes z_k,
// max_distance_k and n_k_root, `pattern` carries its own spec.
struct StatisticSpec {
    enum class Kind {
        heavy_path_length,
        two_heavy_size,
        height,
        z_k,
        max_distance_k,
        n_k_root,
        pattern
    };
    Kind kind = Kind::heavy_path_length;
    std::int64_t k = 1;
    PatternSpec pattern_spec = PatternSpec::heavy_path();

    static StatisticSpec parse(const std::string& text, std::int64_t k = 1) {
        StatisticSpec s;
        s.k = k;
        if (text == "heavy_path_length")
            s.kind = Kind::heavy_path_length;
        else if (text == "two_heavy_size")
            s.kind = Kind::two_heavy_size;
        else if (text == "height")
            s.kind = Kind::height;
        else if (text == "z_k")
            s.kind = Kind::z_k;
        else if (text == "max_distance_k")
            s.kind = Kind::max_distance_k;
        else if (text.rfind("pattern:", 0) == 0) {
            s.kind = Kind::pattern;
            s.pattern_spec = PatternSpec::parse(text.substr(8));
        } else if (text == "n_k_root")
            s.kind = Kind::n_k_root;
        else
            throw ConfigError("unknown statistic '" + text +
                              "'; expected heavy_path_length, two_heavy_size, height, z_k, "
                              "max_distance_k, n_k_root or pattern:<spec>");
        return s;
    }
};

inline std::int64_t evaluate_statistic(const OrderedTree& t, const StatisticSpec& spec) {
    switch (spec.kind) {
        case StatisticSpec::Kind::heavy_path_length:
            return heavy_path(t).length();
        case StatisticSpec::Kind::two_heavy_size:
            return k_heavy_size(t, heavy_decomposition(t), 2);
        case StatisticSpec::Kind::height:
            return height(t);
        case StatisticSpec::Kind::z_k: {
            if (spec.k < 1 || spec.k > t.n()) return 0;
            std::int64_t z = 0;
            for (NodeIndex s : t.subtree_size)
                if (s == spec.k) ++z;
            return z;
        }
        case StatisticSpec::Kind::max_distance_k:
            return max_distance_to_k_heavy(t, heavy_decomposition(t), spec.k);
        case StatisticSpec::Kind::n_k_root: {
            const auto stats = subtree_order_stats(t, 0);
            return spec.k <= static_cast<std::int64_t>(stats.size())
                       ? stats[static_cast<std::size_t>(spec.k - 1)]
                       : 0;
        }
        case StatisticSpec::Kind::pattern:
            return pattern_count(t, heavy_decomposition(t), spec.pattern_spec);
    }
    return 0;
}

inline ExactDistribution exact_statistic_distribution(const OffspringDistribution& dist,
                                                      std::int64_t n, const StatisticSpec& spec,
                                                      std::int64_t guard = 16) {
    std::map<std::int64_t, long double> mass;
    long double total = 0.0L;
    enumerate_trees(
        dist, n,
        [&](const OrderedTree& t, double w) {
            mass[evaluate_statistic(t, spec)] += w;
            total += w;
        },
        guard);
    if (total <= 0.0L)
        throw size_not_in_support_error(dist, n);
    ExactDistribution out;
    out.total = static_cast<double>(total);
    for (const auto& [value, m] : mass) {
        out.support.push_back(value);
        out.probs.push_back(static_cast<double>(m / total));
    }
    return out;
}

// Cross-checks the enumeration against the closed walk-probability
// formulas: the Dwass identity for P(|T| = n), E[Z_k], and E[Z_k (Z_k-1)],
// for every n in I up to nmax and every 1 <= k <= n.
struct IdentityReport {
    std::int64_t checks = 0;
    double max_discrepancy = 0.0;
    std::vector<std::string> failures;  // entries beyond the tolerance

    bool ok() const { return failures.empty(); }
};

inline IdentityReport verify_identities(const OffspringDistribution& dist, std::int64_t nmax,
                                        double tolerance = 1e-12) {
    if (nmax > 12) throw ResourceError("verify_identities: nmax is guarded at 12");
    IdentityReport report;
    auto record = [&](const std::string& what, double got, double want) {
        const double diff = std::abs(got - want);
        report.max_discrepancy = std::max(report.max_discrepancy, diff);
        ++report.checks;
        if (diff > tolerance)
            report.failures.push_back(what + ": |" + std::to_string(got) + " - " +
                                      std::to_string(want) + "| = " + std::to_string(diff));
    };

    for (std::int64_t n : size_support(dist, nmax)) {
        long double total = 0.0L;
        std::vector<long double> zk_sum(static_cast<std::size_t>(n), 0.0L);
        std::vector<long double> zk_sq_sum(static_cast<std::size_t>(n), 0.0L);
        std::vector<std::int64_t> z(static_cast<std::size_t>(n));
        enumerate_trees(dist, n, [&](const OrderedTree& t, double w) {
            total += w;
            std::fill(z.begin(), z.end(), 0);
            for (NodeIndex s : t.subtree_size) ++z[static_cast<std::size_t>(s - 1)];
            for (std::int64_t k = 0; k < n; ++k) {
                zk_sum[static_cast<std::size_t>(k)] += w * static_cast<long double>(z[static_cast<std::size_t>(k)]);
                zk_sq_sum[static_cast<std::size_t>(k)] +=
                    w * static_cast<long double>(z[static_cast<std::size_t>(k)]) *
                    static_cast<long double>(z[static_cast<std::size_t>(k)]);
            }
        });
        const std::string tag = dist.name + " n=" + std::to_string(n);
        record(tag + " Dwass", static_cast<double>(total), gw_total_size_pmf(dist, n));
        for (std::int64_t k = 1; k <= n; ++k) {
            const auto moments = expected_zk(dist, n, k);
            const long double mean = zk_sum[static_cast<std::size_t>(k - 1)] / total;
            const long double second_factorial =
                (zk_sq_sum[static_cast<std::size_t>(k - 1)] - zk_sum[static_cast<std::size_t>(k - 1)]) / total;
            record(tag + " E[Z_" + std::to_string(k) + "]", static_cast<double>(mean), moments.mean);
            record(tag + " E[Z_" + std::to_string(k) + "(Z-1)]",
                   static_cast<double>(second_factorial), moments.second_factorial);
        }
    }
    return report;
}

}  // namespace gw
