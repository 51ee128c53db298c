#include <catch2/catch.hpp>

#include <cmath>

#include "gwheavy/offspring.hpp"

using namespace gw;

TEST_CASE("named offspring laws carry the right constants") {
    const auto catalan = make_named("catalan");
    CHECK(catalan.sigma2 == Approx(0.5).margin(1e-12));
    CHECK(catalan.span == 1);
    CHECK(catalan.alpha == Approx(1.0 / std::sqrt(0.5 * 2.0 * M_PI)).margin(1e-12));

    const auto full_binary = make_named("full_binary");
    CHECK(full_binary.sigma2 == Approx(1.0).margin(1e-12));
    CHECK(full_binary.span == 2);

    const auto ternary = make_named("apollonian_ternary");
    CHECK(ternary.sigma2 == Approx(2.0).margin(1e-12));
    CHECK(ternary.span == 3);
    CHECK(ternary.alpha == Approx(3.0 / (2.0 * std::sqrt(M_PI))).margin(1e-12));

    const auto poisson = make_named("poisson1");
    CHECK(poisson.sigma2 == Approx(1.0).margin(1e-9));
    CHECK(poisson.span == 1);
    CHECK(poisson.truncation_mass < 1e-80);

    // alpha recomputes from the stored fields
    for (const auto& d : {catalan, full_binary, ternary, poisson})
        CHECK(d.alpha ==
              Approx(static_cast<double>(d.span) / (std::sqrt(d.sigma2) * std::sqrt(2.0 * M_PI)))
                  .margin(1e-12));

    CHECK_THROWS_AS(make_named("geometric"), ConfigError);
}

TEST_CASE("from_weights validates criticality and variance") {
    const auto d = from_weights({0.25, 0.5, 0.25});
    CHECK(d.sigma2 == Approx(0.5));
    CHECK(d.span == 1);

    CHECK_THROWS_AS(from_weights({0.5, 0.5}), DomainError);   // mean 1/2
    CHECK_THROWS_AS(from_weights({0.0, 1.0}), DomainError);   // sigma^2 = 0
    CHECK_THROWS_AS(from_weights({0.3, 0.3}), ConfigError);   // does not sum to 1
    CHECK_THROWS_AS(from_weights({-0.1, 1.1}), ConfigError);  // negative
}

TEST_CASE("size-biased law") {
    CHECK(size_biased(make_named("full_binary")) == std::vector<double>{0.0, 0.0, 1.0});
    const auto catalan = size_biased(make_named("catalan"));
    CHECK(catalan[0] == 0.0);
    CHECK(catalan[1] == Approx(0.5));
    CHECK(catalan[2] == Approx(0.5));
    const auto ternary = size_biased(make_named("apollonian_ternary"));
    CHECK(ternary[3] == Approx(1.0));
    for (const auto& name : {"catalan", "full_binary", "poisson1", "apollonian_ternary"}) {
        const auto biased = size_biased(make_named(name));
        double sum = 0.0;
        for (double b : biased) sum += b;
        CHECK(sum == Approx(1.0).margin(1e-9));
    }
}

namespace {

// independent oracle: full enumeration of all support^m step sequences
std::vector<double> brute_force_walk(const OffspringDistribution& dist, int m) {
    const auto support = dist.support();
    std::vector<double> pmf(static_cast<std::size_t>(m * dist.max_degree() + 1), 0.0);
    std::vector<std::size_t> choice(static_cast<std::size_t>(m), 0);
    while (true) {
        double w = 1.0;
        std::int64_t sum = 0;
        for (int i = 0; i < m; ++i) {
            const std::int64_t deg = support[choice[static_cast<std::size_t>(i)]];
            w *= dist.probs[static_cast<std::size_t>(deg)];
            sum += deg - 1;
        }
        pmf[static_cast<std::size_t>(sum + m)] += w;
        int pos = 0;
        while (pos < m) {
            if (++choice[static_cast<std::size_t>(pos)] < support.size()) break;
            choice[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == m) break;
    }
    return pmf;
}

}  // namespace

TEST_CASE("walk pmf matches brute-force enumeration") {
    for (const auto& name : {"catalan", "full_binary", "apollonian_ternary"}) {
        const auto dist = make_named(name);
        for (int m = 0; m <= 6; ++m) {
            const auto pmf = walk_pmf(dist, m);
            const auto brute = brute_force_walk(dist, m);
            REQUIRE(pmf.values.size() == brute.size());
            for (std::size_t i = 0; i < brute.size(); ++i)
                CHECK(pmf.values[i] == Approx(brute[i]).margin(1e-14));
        }
    }
}

TEST_CASE("walk pmf spot values") {
    const auto fb = make_named("full_binary");
    CHECK(walk_pmf(fb, 2).prob(0) == Approx(0.5));
    CHECK(walk_pmf(fb, 3).prob(-1) == Approx(3.0 / 8.0));
    CHECK(walk_pmf(fb, 0).prob(0) == 1.0);
    CHECK(walk_pmf(make_named("catalan"), 0).prob(0) == 1.0);
    CHECK_THROWS_AS(walk_pmf(fb, 20000), ResourceError);
    CHECK_NOTHROW(walk_pmf(fb, 10001, 10001));  // caller may raise the guard
}

TEST_CASE("walk pmf mass is conserved") {
    for (const auto& name : {"catalan", "full_binary", "poisson1", "apollonian_ternary"}) {
        const auto dist = make_named(name);
        for (int m : {1, 17, 200}) {
            const double mass = walk_pmf(dist, m).total_mass();
            CHECK(mass <= 1.0 + 1e-12);
            CHECK(mass >= 1.0 - 10.0 * dist.truncation_mass - 1e-12);
        }
    }
}

TEST_CASE("total size pmf via the Dwass identity") {
    const auto catalan = make_named("catalan");
    CHECK(gw_total_size_pmf(catalan, 1) == Approx(0.25));
    // the two size-3 trees weigh p1^2 p0 and p2 p0^2
    CHECK(gw_total_size_pmf(catalan, 3) ==
          Approx(0.5 * 0.5 * 0.25 + 0.25 * 0.25 * 0.25).margin(1e-15));
    CHECK(gw_total_size_pmf(make_named("full_binary"), 5) == Approx(1.0 / 16.0));
    CHECK(gw_total_size_pmf(make_named("full_binary"), 4) == 0.0);
}

TEST_CASE("forest size pmf") {
    const auto fb = make_named("full_binary");
    CHECK(forest_size_pmf(fb, 2, 2) == Approx(0.25));
    const auto catalan = make_named("catalan");
    // k = 1 reduces to the single-tree law
    for (std::int64_t n : {1, 2, 3, 7})
        CHECK(forest_size_pmf(catalan, 1, n) == Approx(gw_total_size_pmf(catalan, n)).margin(1e-15));
    // brute force over the splits of n = 3 into two tree sizes
    const double split = 2.0 * gw_total_size_pmf(catalan, 1) * gw_total_size_pmf(catalan, 2);
    CHECK(forest_size_pmf(catalan, 2, 3) == Approx(split).margin(1e-15));
    CHECK_THROWS_AS(forest_size_pmf(catalan, 0, 3), DomainError);
}

TEST_CASE("exact fringe count moments") {
    const auto fb = make_named("full_binary");
    CHECK(expected_zk(fb, 3, 1).mean == Approx(2.0).margin(1e-12));
    CHECK(expected_zk(fb, 3, 3).mean == Approx(1.0).margin(1e-12));
    CHECK(expected_zk(fb, 5, 1).second_factorial == Approx(6.0).margin(1e-12));
    CHECK(expected_zk(fb, 5, 3).second_factorial == 0.0);  // k > (n-1)/2
    CHECK_THROWS_WITH(expected_zk(fb, 4, 1), Catch::Contains("nearest valid sizes"));
}

TEST_CASE("size support sieve") {
    CHECK(size_support(make_named("full_binary"), 6) == std::vector<std::int64_t>{1, 3, 5});
    CHECK(size_support(make_named("apollonian_ternary"), 10) ==
          std::vector<std::int64_t>{1, 4, 7, 10});
    CHECK(size_support(make_named("catalan"), 4) == std::vector<std::int64_t>{1, 2, 3, 4});

    // agrees with positivity of the exact size law
    for (const auto& name : {"catalan", "full_binary", "poisson1", "apollonian_ternary"}) {
        const auto dist = make_named(name);
        const auto mask = size_support_mask(dist, 40);
        for (std::int64_t n = 1; n <= 40; ++n)
            CHECK((mask[static_cast<std::size_t>(n - 1)] != 0) ==
                  (gw_total_size_pmf(dist, n) > 0.0));
    }
}

TEST_CASE("local limit envelope at m = 4000") {
    // the exact point probabilities track the Gaussian local limit shape
    const auto catalan = make_named("catalan");
    const std::int64_t m = 4000;
    const auto pmf = walk_pmf(catalan, m);
    const double alpha = catalan.alpha;
    const double bound = 0.25 * alpha / std::sqrt(static_cast<double>(m));
    const std::int64_t window = static_cast<std::int64_t>(std::sqrt(static_cast<double>(m)));
    for (std::int64_t x = -window; x <= window; ++x) {
        const double gauss = alpha / std::sqrt(static_cast<double>(m)) *
                             std::exp(-static_cast<double>(x * x) /
                                      (2.0 * catalan.sigma2 * static_cast<double>(m)));
        CHECK(std::abs(pmf.prob(x) - gauss) <= bound);
    }
}

TEST_CASE("fringe means approach the Aldous limit") {
    const auto catalan = make_named("catalan");
    const std::int64_t n = 4001;
    for (std::int64_t k = 1; k <= 5; ++k) {
        const double mean = expected_zk(catalan, n, k).mean;
        const double limit = static_cast<double>(n) * gw_total_size_pmf(catalan, k);
        CHECK(mean / limit == Approx(1.0).margin(0.01));
    }
}
