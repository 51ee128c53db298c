#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "gwheavy/errors.hpp"
#include "gwheavy/tree.hpp"

namespace gw {

// Sibling ranks: every set of siblings is ordered by subtree size, largest
// first, ties broken by preorder position. rank[v] is v's position in that
// order (1-based); rho_star[v] is the maximal rank along the path from the
// root to v. Both are 0 for the root.
struct HeavyDecomposition {
    std::vector<NodeIndex> rank;
    std::vector<NodeIndex> rho_star;
};

inline HeavyDecomposition heavy_decomposition(const OrderedTree& t) {
    const std::int64_t n = t.n();
    HeavyDecomposition d;
    d.rank.assign(static_cast<std::size_t>(n), 0);
    d.rho_star.assign(static_cast<std::size_t>(n), 0);

    std::vector<NodeIndex> block;
    for (std::int64_t v = 0; v < n; ++v) {
        if (t.degrees[static_cast<std::size_t>(v)] == 0) continue;
        block.clear();
        for (NodeIndex c = t.first_child[static_cast<std::size_t>(v)]; c != kNoNode;
             c = t.next_sibling[static_cast<std::size_t>(c)])
            block.push_back(c);
        // stable sort by size descending keeps preorder order among ties
        std::stable_sort(block.begin(), block.end(), [&](NodeIndex a, NodeIndex b) {
            return t.subtree_size[static_cast<std::size_t>(a)] >
                   t.subtree_size[static_cast<std::size_t>(b)];
        });
        for (std::size_t i = 0; i < block.size(); ++i)
            d.rank[static_cast<std::size_t>(block[i])] = static_cast<NodeIndex>(i + 1);
    }
    for (std::int64_t v = 1; v < n; ++v)
        d.rho_star[static_cast<std::size_t>(v)] =
            std::max(d.rho_star[static_cast<std::size_t>(t.parent[static_cast<std::size_t>(v)])],
                     d.rank[static_cast<std::size_t>(v)]);
    return d;
}

// The k-heavy tree: root plus every v with rho_star[v] <= k. The mask is
// ancestor-closed because rho_star is non-decreasing along root paths.
struct KHeavyTree {
    std::int64_t size = 0;
    std::vector<char> mask;
};

inline KHeavyTree k_heavy_tree(const OrderedTree& t, const HeavyDecomposition& d, std::int64_t k) {
    if (k < 1) throw DomainError("k_heavy_tree: k must be >= 1");
    KHeavyTree out;
    out.mask.assign(static_cast<std::size_t>(t.n()), 0);
    for (std::int64_t v = 0; v < t.n(); ++v)
        if (d.rho_star[static_cast<std::size_t>(v)] <= k) {
            out.mask[static_cast<std::size_t>(v)] = 1;
            ++out.size;
        }
    return out;
}

inline std::int64_t k_heavy_size(const OrderedTree& t, const HeavyDecomposition& d, std::int64_t k) {
    if (k < 1) throw DomainError("k_heavy_size: k must be >= 1");
    std::int64_t size = 0;
    for (std::int64_t v = 0; v < t.n(); ++v)
        if (d.rho_star[static_cast<std::size_t>(v)] <= k) ++size;
    return size;
}

// Heavy path profile: the nodes of the rank-1 path from the root, their
// subtree sizes P(0) > P(1) > ... > P(L) = 1, and the hitting times
// Q(l) = min{ k : P(k) <= l }. Q is defined for l >= 1; the infimum over
// P <= 0 is never attained since subtree sizes are positive.
struct HeavyPathProfile {
    std::vector<NodeIndex> nodes;
    std::vector<std::int64_t> sizes;

    std::int64_t length() const { return static_cast<std::int64_t>(nodes.size()) - 1; }

    std::int64_t q(std::int64_t l) const {
        if (l < 1) throw DomainError("HeavyPathProfile::q: defined for l >= 1 only");
        // sizes are strictly decreasing; find the first index with size <= l
        const auto it = std::lower_bound(sizes.begin(), sizes.end(), l,
                                         [](std::int64_t size, std::int64_t val) { return size > val; });
        return static_cast<std::int64_t>(it - sizes.begin());
    }
};

inline HeavyPathProfile heavy_path(const OrderedTree& t) {
    HeavyPathProfile p;
    NodeIndex v = 0;
    while (true) {
        p.nodes.push_back(v);
        p.sizes.push_back(t.subtree_size[static_cast<std::size_t>(v)]);
        NodeIndex best = kNoNode;
        NodeIndex best_size = 0;
        for (NodeIndex c = t.first_child[static_cast<std::size_t>(v)]; c != kNoNode;
             c = t.next_sibling[static_cast<std::size_t>(c)]) {
            if (t.subtree_size[static_cast<std::size_t>(c)] > best_size) {
                best = c;
                best_size = t.subtree_size[static_cast<std::size_t>(c)];
            }
        }
        if (best == kNoNode) break;
        v = best;
    }
    return p;
}

// Maximal distance from any node outside the k-heavy tree to it. The
// k-heavy tree is ancestor-closed, so the nearest member is always an
// ancestor and one preorder pass suffices.
inline std::int64_t max_distance_to_k_heavy(const OrderedTree& t, const HeavyDecomposition& d,
                                            std::int64_t k) {
    if (k < 1) throw DomainError("max_distance_to_k_heavy: k must be >= 1");
    std::vector<NodeIndex> dist(static_cast<std::size_t>(t.n()), 0);
    std::int64_t best = 0;
    for (std::int64_t v = 1; v < t.n(); ++v) {
        if (d.rho_star[static_cast<std::size_t>(v)] <= k) continue;
        const NodeIndex p = t.parent[static_cast<std::size_t>(v)];
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(p)] + 1;
        best = std::max<std::int64_t>(best, dist[static_cast<std::size_t>(v)]);
    }
    return best;
}

// Maxima over all nodes of N_k(v) (size of the k-th largest child subtree)
// and N_{k+}(v) = N(v) - 1 - sum of the k-1 largest child subtrees.
struct KthSubtreeMaxima {
    std::int64_t max_nk = 0;
    std::int64_t max_nk_plus = 0;
};

inline KthSubtreeMaxima max_kth_subtree(const OrderedTree& t, std::int64_t k) {
    if (k < 1) throw DomainError("max_kth_subtree: k must be >= 1");
    KthSubtreeMaxima out;
    std::vector<std::int64_t> top(static_cast<std::size_t>(k), 0);
    for (std::int64_t v = 0; v < t.n(); ++v) {
        if (t.degrees[static_cast<std::size_t>(v)] == 0) continue;
        std::fill(top.begin(), top.end(), 0);
        std::int64_t total = 0;
        for (NodeIndex c = t.first_child[static_cast<std::size_t>(v)]; c != kNoNode;
             c = t.next_sibling[static_cast<std::size_t>(c)]) {
            const std::int64_t s = t.subtree_size[static_cast<std::size_t>(c)];
            total += s;
            // insertion into the running top-k buffer
            std::int64_t cur = s;
            for (std::size_t i = 0; i < top.size(); ++i)
                if (cur > top[i]) std::swap(cur, top[i]);
        }
        const std::int64_t nk =
            t.degrees[static_cast<std::size_t>(v)] >= k ? top[static_cast<std::size_t>(k - 1)] : 0;
        std::int64_t head = 0;
        for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(k); ++i) head += top[i];
        out.max_nk = std::max(out.max_nk, nk);
        out.max_nk_plus = std::max(out.max_nk_plus, total - head);
    }
    return out;
}

// Index-sequence pattern family over kappa(v) = (rank of each ancestor,
// root excluded, ending at v's own rank):
//   heavy_path        1*                      the heavy path
//   binary_blocks(k)  (1*2)^k 1*              exactly k twos, no rank >= 3
//   blocks_then_big   (1*2)^k 1* (j+) N*      k twos, then a rank >= j, then anything
//   all_ge2           {2+}*                   no rank 1 anywhere
// The root has kappa = empty and matches the starred patterns with k = 0.
struct PatternSpec {
    enum class Kind { heavy_path, binary_blocks, blocks_then_big, all_ge2 };
    Kind kind = Kind::heavy_path;
    std::int64_t blocks = 0;   // k
    std::int64_t big_min = 3;  // j

    static PatternSpec heavy_path() { return {Kind::heavy_path, 0, 3}; }
    static PatternSpec binary_blocks(std::int64_t k) { return {Kind::binary_blocks, k, 3}; }
    static PatternSpec blocks_then_big(std::int64_t k, std::int64_t j) {
        return {Kind::blocks_then_big, k, j};
    }
    static PatternSpec all_ge2() { return {Kind::all_ge2, 0, 3}; }

    // textual form used by the CLI: heavy_path | binary_blocks:k |
    // blocks_then_big:k:j | all_ge2
    static PatternSpec parse(const std::string& text) {
        auto split = [](const std::string& s) {
            std::vector<std::string> parts;
            std::size_t start = 0;
            while (true) {
                const auto colon = s.find(':', start);
                parts.push_back(s.substr(start, colon - start));
                if (colon == std::string::npos) break;
                start = colon + 1;
            }
            return parts;
        };
        const auto parts = split(text);
        try {
            if (parts[0] == "heavy_path" && parts.size() == 1) return heavy_path();
            if (parts[0] == "all_ge2" && parts.size() == 1) return all_ge2();
            if (parts[0] == "binary_blocks" && parts.size() == 2)
                return binary_blocks(std::stoll(parts[1]));
            if (parts[0] == "blocks_then_big" && parts.size() == 3)
                return blocks_then_big(std::stoll(parts[1]), std::stoll(parts[2]));
        } catch (const std::exception&) {
        }
        throw ConfigError("unknown pattern '" + text +
                          "'; expected heavy_path, binary_blocks:k, blocks_then_big:k:j or all_ge2");
    }
};

// Counts nodes whose index sequence lies in the pattern language with a
// single preorder pass carrying one automaton state per node.
inline std::int64_t pattern_count(const OrderedTree& t, const HeavyDecomposition& d,
                                  const PatternSpec& pattern) {
    constexpr NodeIndex kDead = -1;
    constexpr NodeIndex kMatchedBig = -2;  // absorbing state of blocks_then_big
    const std::int64_t n = t.n();
    // state >= 0 encodes "inside {1,2}*, `state` twos seen so far";
    // heavy_path and all_ge2 reuse state 0 as plain "alive".
    std::vector<NodeIndex> state(static_cast<std::size_t>(n), kDead);
    state[0] = 0;

    auto transition = [&pattern](NodeIndex from, NodeIndex rank) -> NodeIndex {
        if (from == kDead) return kDead;
        switch (pattern.kind) {
            case PatternSpec::Kind::heavy_path:
                return rank == 1 ? from : kDead;
            case PatternSpec::Kind::all_ge2:
                return rank >= 2 ? from : kDead;
            case PatternSpec::Kind::binary_blocks:
                if (rank == 1) return from;
                if (rank == 2) return from + 1 > pattern.blocks ? kDead : from + 1;
                return kDead;
            case PatternSpec::Kind::blocks_then_big:
                if (from == kMatchedBig) return kMatchedBig;
                if (rank == 1) return from;
                if (rank == 2) return from + 1 > pattern.blocks ? kDead : from + 1;
                return (from == pattern.blocks && rank >= pattern.big_min) ? kMatchedBig : kDead;
        }
        return kDead;
    };
    auto matches = [&pattern](NodeIndex s) {
        switch (pattern.kind) {
            case PatternSpec::Kind::heavy_path:
            case PatternSpec::Kind::all_ge2:
                return s == 0;
            case PatternSpec::Kind::binary_blocks:
                return s == pattern.blocks;
            case PatternSpec::Kind::blocks_then_big:
                return s == kMatchedBig;
        }
        return false;
    };

    std::int64_t count = matches(state[0]) ? 1 : 0;
    for (std::int64_t v = 1; v < n; ++v) {
        const NodeIndex s = transition(state[static_cast<std::size_t>(t.parent[static_cast<std::size_t>(v)])],
                                       d.rank[static_cast<std::size_t>(v)]);
        state[static_cast<std::size_t>(v)] = s;
        if (matches(s)) ++count;
    }
    return count;
}

}  // namespace gw
