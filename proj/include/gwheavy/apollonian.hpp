#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "gwheavy/errors.hpp"
#include "gwheavy/rng.hpp"
#include "gwheavy/sampler.hpp"
#include "gwheavy/tree.hpp"

namespace gw {

using VertexId = std::int32_t;

// Apollonian network grown by repeated triangle subdivision, kept together
// with its ternary dual tree. Vertices are numbered in creation order, the
// initial corners being 1, 2, 3.
struct ApollonianNetwork {
    struct Triangle {
        VertexId corners[3];   // ascending vertex ids
        VertexId center = 0;   // 0 if the triangle is not subdivided
    };

    std::int64_t num_vertices = 0;                     // 3 + m
    std::vector<std::pair<VertexId, VertexId>> edges;  // sorted pair list
    std::vector<Triangle> triangles;                   // one per dual node, preorder
    OrderedTree dual;                                  // degrees in {0, 3}

    std::int64_t num_subdivisions() const { return num_vertices - 3; }
};

// Deterministic network from a ternary dual tree. Children of a subdivided
// triangle {a,b,c} (corners ascending) with center d are emitted in the
// order {a,b,d}, {b,c,d}, {a,c,d}, which fixes the bijection.
inline ApollonianNetwork build_from_dual(OrderedTree dual) {
    for (std::int64_t v = 0; v < dual.n(); ++v) {
        const NodeIndex deg = dual.degrees[static_cast<std::size_t>(v)];
        if (deg != 0 && deg != 3)
            throw DomainError("build_from_dual: node " + std::to_string(v + 1) + " has degree " +
                              std::to_string(deg) + ", dual trees are ternary");
    }
    ApollonianNetwork net;
    net.triangles.resize(static_cast<std::size_t>(dual.n()));
    net.triangles[0] = {{1, 2, 3}, 0};
    net.edges = {{1, 2}, {1, 3}, {2, 3}};
    VertexId next_vertex = 4;

    for (std::int64_t v = 0; v < dual.n(); ++v) {
        if (dual.degrees[static_cast<std::size_t>(v)] == 0) continue;
        auto& tri = net.triangles[static_cast<std::size_t>(v)];
        const VertexId a = tri.corners[0], b = tri.corners[1], c = tri.corners[2];
        const VertexId d = next_vertex++;
        tri.center = d;
        net.edges.emplace_back(a, d);
        net.edges.emplace_back(b, d);
        net.edges.emplace_back(c, d);

        NodeIndex child = dual.first_child[static_cast<std::size_t>(v)];
        const VertexId child_corners[3][3] = {{a, b, d}, {b, c, d}, {a, c, d}};
        for (int i = 0; i < 3; ++i) {
            auto& ct = net.triangles[static_cast<std::size_t>(child)];
            ct = {{child_corners[i][0], child_corners[i][1], child_corners[i][2]}, 0};
            std::sort(std::begin(ct.corners), std::end(ct.corners));
            child = dual.next_sibling[static_cast<std::size_t>(child)];
        }
    }
    net.num_vertices = next_vertex - 1;
    std::sort(net.edges.begin(), net.edges.end());
    net.dual = std::move(dual);
    return net;
}

// Uniform random Apollonian network with m subdivisions: sample the
// conditional ternary tree of size 3m + 1 and replay it in preorder.
inline ApollonianNetwork sample_uniform_apollonian(std::int64_t m, Rng& rng) {
    if (m < 0) throw DomainError("sample_uniform_apollonian: m must be >= 0");
    const OffspringDistribution dist = make_named("apollonian_ternary");
    MultisetSampler sampler(dist, 3 * m + 1);
    return build_from_dual(sampler.sample(rng));
}

// A simple path constructed by routing through triangle centers, always
// descending into the two children with the most subdivided descendants.
struct SimplePath {
    std::vector<VertexId> vertices;
    std::int64_t selected_internal = 0;  // subdivided triangles used
};

inline SimplePath heavy_simple_path(const ApollonianNetwork& net) {
    SimplePath out;
    const OrderedTree& dual = net.dual;

    if (net.triangles[0].center == 0) {
        out.vertices = {net.triangles[0].corners[0], net.triangles[0].corners[1]};
        return out;
    }

    // number of subdivided triangles in each dual subtree
    std::vector<std::int64_t> internal_count(static_cast<std::size_t>(dual.n()), 0);
    for (std::int64_t v = dual.n() - 1; v >= 0; --v) {
        if (dual.degrees[static_cast<std::size_t>(v)] == 0) continue;
        std::int64_t cnt = 1;
        for (NodeIndex c = dual.first_child[static_cast<std::size_t>(v)]; c != kNoNode;
             c = dual.next_sibling[static_cast<std::size_t>(c)])
            cnt += internal_count[static_cast<std::size_t>(c)];
        internal_count[static_cast<std::size_t>(v)] = cnt;
    }

    auto contains = [&](NodeIndex tri, VertexId x) {
        const auto& t = net.triangles[static_cast<std::size_t>(tri)];
        return t.corners[0] == x || t.corners[1] == x || t.corners[2] == x;
    };

    // Every corner pair of the root admits both heaviest children, so the
    // root entry/exit tie-breaks to the smallest vertex ids.
    const VertexId root_a = net.triangles[0].corners[0];
    const VertexId root_b = net.triangles[0].corners[1];

    struct Frame {
        NodeIndex tri;
        VertexId entry, exit;
    };
    std::vector<Frame> stack;
    out.vertices.push_back(root_a);
    stack.push_back({0, root_a, root_b});
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        const auto& tri = net.triangles[static_cast<std::size_t>(f.tri)];
        if (tri.center == 0) {
            out.vertices.push_back(f.exit);
            continue;
        }
        ++out.selected_internal;
        const VertexId c = tri.center;

        // two children with the most subdivided descendants, ties by preorder
        NodeIndex kids[3];
        int idx = 0;
        for (NodeIndex k = dual.first_child[static_cast<std::size_t>(f.tri)]; k != kNoNode;
             k = dual.next_sibling[static_cast<std::size_t>(k)])
            kids[idx++] = k;
        NodeIndex drop = kids[0];
        for (int i = 1; i < 3; ++i)
            if (internal_count[static_cast<std::size_t>(kids[i])] <=
                internal_count[static_cast<std::size_t>(drop)])
                drop = kids[i];  // <= drops the latest of tied minima, keeping earlier preorder
        NodeIndex heavy[2];
        int h = 0;
        for (int i = 0; i < 3; ++i)
            if (kids[i] != drop) heavy[h++] = kids[i];

        // orient the pair: the leg ending at f.exit goes second
        NodeIndex first = heavy[0], second = heavy[1];
        const bool b0 = contains(first, f.exit);
        const bool b1 = contains(second, f.exit);
        if (b0 && b1) {
            // both contain the exit corner; the entry-containing one leads
            if (!contains(first, f.entry)) std::swap(first, second);
        } else if (b0) {
            std::swap(first, second);
        }
        if (!contains(first, f.entry) || !contains(second, f.exit))
            throw InvariantError("heavy_simple_path: child orientation failed");

        stack.push_back({second, c, f.exit});
        stack.push_back({first, f.entry, c});
    }

    if (static_cast<std::int64_t>(out.vertices.size()) != out.selected_internal + 2)
        throw InvariantError("heavy_simple_path: |vertices| != 2 + selected_internal");
    return out;
}

// True iff the vertex sequence is a simple path of the network: all
// vertices distinct and consecutive pairs adjacent.
inline bool verify_simple_path(const ApollonianNetwork& net, const std::vector<VertexId>& path) {
    if (path.empty()) return false;
    std::unordered_set<std::int64_t> seen;
    for (VertexId v : path) {
        if (v < 1 || v > net.num_vertices) return false;
        if (!seen.insert(v).second) return false;
    }
    std::unordered_set<std::int64_t> edge_keys;
    edge_keys.reserve(net.edges.size() * 2);
    for (const auto& e : net.edges)
        edge_keys.insert(static_cast<std::int64_t>(e.first) << 32 | static_cast<std::uint32_t>(e.second));
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const VertexId a = std::min(path[i], path[i + 1]);
        const VertexId b = std::max(path[i], path[i + 1]);
        if (!edge_keys.count(static_cast<std::int64_t>(a) << 32 | static_cast<std::uint32_t>(b)))
            return false;
    }
    return true;
}

}  // namespace gw
