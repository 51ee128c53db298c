#include <catch2/catch.hpp>

#include <map>

#include "gwheavy/oracle.hpp"

using namespace gw;

TEST_CASE("enumeration produces every weighted tree exactly once") {
    const auto fb = make_named("full_binary");
    std::vector<double> weights;
    std::map<std::vector<NodeIndex>, int> seen;
    enumerate_trees(fb, 5, [&](const OrderedTree& t, double w) {
        weights.push_back(w);
        ++seen[t.degrees];
    });
    REQUIRE(weights.size() == 2);
    for (double w : weights) CHECK(w == Approx(1.0 / 32.0));
    for (const auto& [degrees, count] : seen) CHECK(count == 1);

    const auto catalan = make_named("catalan");
    std::map<std::vector<NodeIndex>, double> catalan3;
    enumerate_trees(catalan, 3, [&](const OrderedTree& t, double w) { catalan3[t.degrees] = w; });
    REQUIRE(catalan3.size() == 2);
    CHECK(catalan3.at({1, 1, 0}) == Approx(1.0 / 16.0));
    CHECK(catalan3.at({2, 0, 0}) == Approx(1.0 / 64.0));

    int singletons = 0;
    enumerate_trees(catalan, 1, [&](const OrderedTree& t, double w) {
        ++singletons;
        CHECK(t.n() == 1);
        CHECK(w == Approx(0.25));
    });
    CHECK(singletons == 1);

    CHECK_THROWS_AS(enumerate_trees(catalan, 17, [](const OrderedTree&, double) {}),
                    ResourceError);
}

TEST_CASE("full binary tree counts are the Catalan numbers") {
    // independent recurrence C_{m+1} = sum C_i C_{m-i}
    std::vector<std::int64_t> catalan_numbers{1};
    for (int m = 0; m < 7; ++m) {
        std::int64_t next = 0;
        for (int i = 0; i <= m; ++i)
            next += catalan_numbers[static_cast<std::size_t>(i)] *
                    catalan_numbers[static_cast<std::size_t>(m - i)];
        catalan_numbers.push_back(next);
    }
    const auto fb = make_named("full_binary");
    for (int m = 0; m <= 7; ++m) {
        std::int64_t count = 0;
        enumerate_trees(fb, 2 * m + 1, [&](const OrderedTree&, double) { ++count; });
        CHECK(count == catalan_numbers[static_cast<std::size_t>(m)]);
    }
}

TEST_CASE("exact statistic distributions") {
    const auto catalan = make_named("catalan");
    const auto hp = exact_statistic_distribution(catalan, 3, StatisticSpec::parse("heavy_path_length"));
    REQUIRE(hp.support == std::vector<std::int64_t>{1, 2});
    CHECK(hp.probs[0] == Approx(0.2).margin(1e-12));
    CHECK(hp.probs[1] == Approx(0.8).margin(1e-12));
    CHECK(hp.total == Approx(gw_total_size_pmf(catalan, 3)).margin(1e-12));

    const auto fb = make_named("full_binary");
    const auto z1 = exact_statistic_distribution(fb, 3, StatisticSpec::parse("z_k", 1));
    REQUIRE(z1.support == std::vector<std::int64_t>{2});
    CHECK(z1.probs[0] == Approx(1.0));

    const auto h1 = exact_statistic_distribution(catalan, 1, StatisticSpec::parse("height"));
    REQUIRE(h1.support == std::vector<std::int64_t>{0});
    CHECK(h1.probs[0] == Approx(1.0));

    // Z_n is the point mass at 1 for every law and size
    for (const auto& name : {"catalan", "full_binary", "poisson1", "apollonian_ternary"}) {
        const auto dist = make_named(name);
        for (std::int64_t n : size_support(dist, 6)) {
            const auto zn = exact_statistic_distribution(dist, n, StatisticSpec::parse("z_k", n));
            REQUIRE(zn.support == std::vector<std::int64_t>{1});
            CHECK(zn.probs[0] == Approx(1.0).margin(1e-12));
        }
    }

    // probabilities always sum to one
    const auto b = exact_statistic_distribution(catalan, 6, StatisticSpec::parse("two_heavy_size"));
    double sum = 0.0;
    for (double p : b.probs) sum += p;
    CHECK(sum == Approx(1.0).margin(1e-12));

    CHECK_THROWS_AS(StatisticSpec::parse("entropy"), ConfigError);
    CHECK_THROWS_AS(exact_statistic_distribution(make_named("full_binary"), 4,
                                                 StatisticSpec::parse("height")),
                    DomainError);
}

TEST_CASE("identities hold to 1e-12") {
    const auto fb_report = verify_identities(make_named("full_binary"), 7);
    CHECK(fb_report.ok());
    CHECK(fb_report.max_discrepancy <= 1e-12);
    CHECK(fb_report.checks > 0);

    const auto catalan_report = verify_identities(make_named("catalan"), 9);
    CHECK(catalan_report.ok());
    CHECK(catalan_report.max_discrepancy <= 1e-12);

    const auto ternary_report = verify_identities(make_named("apollonian_ternary"), 10);
    CHECK(ternary_report.ok());
    CHECK(ternary_report.max_discrepancy <= 1e-12);

    CHECK_THROWS_AS(verify_identities(make_named("catalan"), 13), ResourceError);
}
