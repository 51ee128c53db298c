#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "gwheavy/errors.hpp"

namespace gw {

using NodeIndex = std::int32_t;
constexpr NodeIndex kNoNode = -1;

// Ordered rooted tree in preorder, structure-of-arrays with 32-bit indices.
// All derived arrays are filled at construction; instances are immutable
// afterwards and safe to share across threads.
struct OrderedTree {
    std::vector<NodeIndex> degrees;       // child count per preorder node
    std::vector<NodeIndex> parent;        // kNoNode for the root
    std::vector<NodeIndex> depth;         // root depth 0
    std::vector<NodeIndex> subtree_size;  // N(v)
    std::vector<NodeIndex> first_child;   // kNoNode if leaf
    std::vector<NodeIndex> next_sibling;  // kNoNode if last child

    std::int64_t n() const { return static_cast<std::int64_t>(degrees.size()); }
};

// Validates a preorder degree sequence and computes every derived array in
// two linear passes (forward for parents/depths, backward for subtree
// sizes; no recursion, so path-like trees cannot overflow the stack).
inline OrderedTree from_degrees(std::vector<NodeIndex> degrees) {
    const std::int64_t n = static_cast<std::int64_t>(degrees.size());
    if (n == 0) throw DomainError("from_degrees: empty degree sequence");

    OrderedTree t;
    t.degrees = std::move(degrees);
    t.parent.assign(static_cast<std::size_t>(n), kNoNode);
    t.depth.assign(static_cast<std::size_t>(n), 0);
    t.subtree_size.assign(static_cast<std::size_t>(n), 1);
    t.first_child.assign(static_cast<std::size_t>(n), kNoNode);
    t.next_sibling.assign(static_cast<std::size_t>(n), kNoNode);

    // Walk the Lukasiewicz increments: open = 1 + sum (deg - 1) must stay
    // positive before the last node and hit zero exactly there.
    struct Frame {
        NodeIndex node;
        NodeIndex remaining;
        NodeIndex last_child;
    };
    std::vector<Frame> stack;
    stack.reserve(64);
    std::int64_t open = 1;
    for (std::int64_t i = 0; i < n; ++i) {
        const NodeIndex deg = t.degrees[static_cast<std::size_t>(i)];
        if (deg < 0) throw DomainError("from_degrees: negative degree at position " + std::to_string(i + 1));
        if (i > 0) {
            while (!stack.empty() && stack.back().remaining == 0) stack.pop_back();
            // open > 0 guarantees a pending parent here
            Frame& f = stack.back();
            const NodeIndex p = f.node;
            --f.remaining;
            t.parent[static_cast<std::size_t>(i)] = p;
            t.depth[static_cast<std::size_t>(i)] = t.depth[static_cast<std::size_t>(p)] + 1;
            if (f.last_child == kNoNode)
                t.first_child[static_cast<std::size_t>(p)] = static_cast<NodeIndex>(i);
            else
                t.next_sibling[static_cast<std::size_t>(f.last_child)] = static_cast<NodeIndex>(i);
            f.last_child = static_cast<NodeIndex>(i);
        }
        open += deg - 1;
        if (open <= 0 && i < n - 1)
            throw DomainError("from_degrees: degree sequence closes early at position " +
                              std::to_string(i + 1));
        stack.push_back({static_cast<NodeIndex>(i), deg, kNoNode});
    }
    if (open != 0)
        throw DomainError("from_degrees: degrees sum to " + std::to_string(open + n - 1) +
                          ", expected n - 1 = " + std::to_string(n - 1) + " (offending position " +
                          std::to_string(n) + ")");

    // Reverse-preorder accumulation of subtree sizes.
    std::vector<NodeIndex> sizes;
    sizes.reserve(64);
    for (std::int64_t i = n - 1; i >= 0; --i) {
        NodeIndex s = 1;
        for (NodeIndex c = 0; c < t.degrees[static_cast<std::size_t>(i)]; ++c) {
            s += sizes.back();
            sizes.pop_back();
        }
        t.subtree_size[static_cast<std::size_t>(i)] = s;
        sizes.push_back(s);
    }
    return t;
}

// Lukasiewicz path S_0..S_n with S_i = (xi_1 - 1) + ... + (xi_i - 1).
inline std::vector<std::int64_t> lukasiewicz_path(const OrderedTree& t) {
    std::vector<std::int64_t> s(static_cast<std::size_t>(t.n()) + 1);
    s[0] = 0;
    for (std::int64_t i = 0; i < t.n(); ++i)
        s[static_cast<std::size_t>(i + 1)] =
            s[static_cast<std::size_t>(i)] + t.degrees[static_cast<std::size_t>(i)] - 1;
    return s;
}

// Depth-first (contour) process D_0..D_{2n-2}: node depths along the Euler
// tour, generated with an explicit stack.
inline std::vector<NodeIndex> contour_process(const OrderedTree& t) {
    std::vector<NodeIndex> contour;
    contour.reserve(static_cast<std::size_t>(2 * t.n() - 1));
    contour.push_back(0);
    struct Frame {
        NodeIndex node;
        NodeIndex cursor;  // next child to visit
    };
    std::vector<Frame> stack;
    stack.push_back({0, t.first_child[0]});
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.cursor == kNoNode) {
            stack.pop_back();
            if (!stack.empty())
                contour.push_back(t.depth[static_cast<std::size_t>(stack.back().node)]);
            continue;
        }
        const NodeIndex child = f.cursor;
        f.cursor = t.next_sibling[static_cast<std::size_t>(child)];
        contour.push_back(t.depth[static_cast<std::size_t>(child)]);
        stack.push_back({child, t.first_child[static_cast<std::size_t>(child)]});
    }
    return contour;
}

struct EncodingPaths {
    std::vector<std::int64_t> lukasiewicz;
    std::vector<NodeIndex> contour;
};

inline EncodingPaths encoding_paths(const OrderedTree& t) {
    return {lukasiewicz_path(t), contour_process(t)};
}

// Child subtree sizes of v sorted descending; ties keep preorder position
// (stable sort), matching the sibling rank convention.
inline std::vector<std::int64_t> subtree_order_stats(const OrderedTree& t, NodeIndex v) {
    std::vector<std::int64_t> sizes;
    for (NodeIndex c = t.first_child[static_cast<std::size_t>(v)]; c != kNoNode;
         c = t.next_sibling[static_cast<std::size_t>(c)])
        sizes.push_back(t.subtree_size[static_cast<std::size_t>(c)]);
    std::stable_sort(sizes.begin(), sizes.end(), std::greater<std::int64_t>());
    return sizes;
}

// Z_1..Z_n with Z_k = #{v : N(v) = k}.
inline std::vector<std::int64_t> fringe_counts(const OrderedTree& t) {
    std::vector<std::int64_t> z(static_cast<std::size_t>(t.n()), 0);
    for (std::int64_t v = 0; v < t.n(); ++v)
        ++z[static_cast<std::size_t>(t.subtree_size[static_cast<std::size_t>(v)] - 1)];
    return z;
}

inline std::int64_t height(const OrderedTree& t) {
    NodeIndex h = 0;
    for (NodeIndex d : t.depth) h = std::max(h, d);
    return h;
}

}  // namespace gw
