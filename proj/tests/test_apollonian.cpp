#include <catch2/catch.hpp>

#include <set>

#include "gwheavy/apollonian.hpp"

using namespace gw;

TEST_CASE("smallest networks") {
    Rng rng(3);
    const auto k3 = sample_uniform_apollonian(0, rng);
    CHECK(k3.num_vertices == 3);
    CHECK(k3.edges.size() == 3);
    CHECK(k3.dual.n() == 1);

    const auto k4 = sample_uniform_apollonian(1, rng);
    CHECK(k4.num_vertices == 4);
    CHECK(k4.edges.size() == 6);
    CHECK(k4.dual.n() == 4);

    const auto built = build_from_dual(from_degrees({3, 0, 0, 0}));
    CHECK(built.num_vertices == 4);
    CHECK(built.edges.size() == 6);

    const auto m3 = sample_uniform_apollonian(3, rng);
    CHECK(m3.num_vertices == 6);
    CHECK(m3.edges.size() == 12);
    CHECK(m3.dual.n() == 10);

    CHECK_THROWS_AS(build_from_dual(from_degrees({2, 0, 0})), DomainError);
}

TEST_CASE("network counts and dual structure") {
    for (std::int64_t m : {2, 5, 17, 100}) {
        Rng rng(static_cast<std::uint64_t>(1000 + m));
        const auto net = sample_uniform_apollonian(m, rng);
        CHECK(net.num_vertices == 3 + m);
        CHECK(static_cast<std::int64_t>(net.edges.size()) == 3 + 3 * m);
        CHECK(net.dual.n() == 1 + 3 * m);
        std::int64_t leaves = 0;
        for (NodeIndex d : net.dual.degrees) leaves += d == 0;
        CHECK(leaves == 1 + 2 * m);

        // children of a subdivided triangle share its center and pairwise
        // share exactly one original corner
        for (std::int64_t v = 0; v < net.dual.n(); ++v) {
            const auto& tri = net.triangles[static_cast<std::size_t>(v)];
            if (tri.center == 0) continue;
            std::vector<std::set<VertexId>> kid_corners;
            for (NodeIndex c = net.dual.first_child[static_cast<std::size_t>(v)]; c != kNoNode;
                 c = net.dual.next_sibling[static_cast<std::size_t>(c)]) {
                const auto& kt = net.triangles[static_cast<std::size_t>(c)];
                kid_corners.push_back({kt.corners[0], kt.corners[1], kt.corners[2]});
                CHECK(kid_corners.back().count(tri.center) == 1);
            }
            REQUIRE(kid_corners.size() == 3);
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j) {
                    std::vector<VertexId> common;
                    std::set_intersection(kid_corners[static_cast<std::size_t>(i)].begin(),
                                          kid_corners[static_cast<std::size_t>(i)].end(),
                                          kid_corners[static_cast<std::size_t>(j)].begin(),
                                          kid_corners[static_cast<std::size_t>(j)].end(),
                                          std::back_inserter(common));
                    CHECK(common.size() == 2);  // the center plus one corner
                }
        }
    }
}

TEST_CASE("constructed path on K4") {
    const auto net = build_from_dual(from_degrees({3, 0, 0, 0}));
    const auto path = heavy_simple_path(net);
    CHECK(path.vertices == std::vector<VertexId>{1, 4, 2});
    CHECK(path.selected_internal == 1);
    CHECK(verify_simple_path(net, path.vertices));

    const auto k3 = build_from_dual(from_degrees({0}));
    const auto trivial = heavy_simple_path(k3);
    CHECK(trivial.vertices.size() == 2);
    CHECK(trivial.selected_internal == 0);
    CHECK(verify_simple_path(k3, trivial.vertices));
}

TEST_CASE("verify_simple_path rejects bad paths") {
    const auto net = build_from_dual(from_degrees({3, 0, 0, 0}));
    CHECK_FALSE(verify_simple_path(net, {1, 2, 1}));
    CHECK_FALSE(verify_simple_path(net, {1, 5}));
    CHECK_FALSE(verify_simple_path(net, {}));
    CHECK(verify_simple_path(net, {1, 2}));
}

TEST_CASE("constructed paths are simple on random networks") {
    // 10^4 networks with m up to 10^3
    Rng seeder(90210);
    for (int rep = 0; rep < 10000; ++rep) {
        const std::int64_t m = static_cast<std::int64_t>(seeder.next_below(1000)) + 1;
        Rng rng(substream_seed(777, static_cast<std::uint64_t>(rep)));
        const auto net = sample_uniform_apollonian(m, rng);
        const auto path = heavy_simple_path(net);
        REQUIRE(verify_simple_path(net, path.vertices));
        REQUIRE(static_cast<std::int64_t>(path.vertices.size()) == path.selected_internal + 2);
    }
}

TEST_CASE("path captures a stable fraction of the subdivisions") {
    // |vertices| / m stays bounded away from zero as m grows
    for (std::int64_t m : {100, 1000, 10000}) {
        double worst = 1.0;
        for (int rep = 0; rep < 5; ++rep) {
            Rng rng(substream_seed(31415, static_cast<std::uint64_t>(m * 10 + rep)));
            const auto net = sample_uniform_apollonian(m, rng);
            const auto path = heavy_simple_path(net);
            worst = std::min(worst,
                             static_cast<double>(path.vertices.size()) / static_cast<double>(m));
        }
        CHECK(worst > 0.05);
    }
}
