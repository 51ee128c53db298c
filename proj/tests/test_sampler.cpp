#include <catch2/catch.hpp>

#include <map>
#include <set>

#include "gwheavy/oracle.hpp"
#include "gwheavy/sampler.hpp"
#include "gwheavy/stats.hpp"

using namespace gw;

TEST_CASE("cycle rotation picks the unique excursion") {
    CHECK(cycle_rotate({-1, 1, -1, 1, -1}) == std::vector<NodeIndex>{1, -1, 1, -1, -1});
    CHECK(cycle_rotate({1, 1, -1, -1, -1}) == std::vector<NodeIndex>{1, 1, -1, -1, -1});
    CHECK(cycle_rotate({-1, -1, 1, 1, -1}) == std::vector<NodeIndex>{1, 1, -1, -1, -1});
    CHECK_THROWS_AS(cycle_rotate({1, -1}), DomainError);
    CHECK_THROWS_AS(cycle_rotate({-2, 1}), DomainError);
}

TEST_CASE("cycle rotation: validity and uniqueness on random inputs") {
    Rng rng(2024);
    int checked = 0;
    while (checked < 100000) {
        const std::int64_t len = 1 + static_cast<std::int64_t>(rng.next_below(24));
        std::vector<NodeIndex> inc(static_cast<std::size_t>(len));
        std::int64_t sum = 0;
        for (auto& x : inc) {
            x = static_cast<NodeIndex>(rng.next_below(4)) - 1;  // in {-1,0,1,2}
            sum += x;
        }
        if (sum != -1) continue;
        ++checked;
        const auto rotated = cycle_rotate(inc);

        std::vector<NodeIndex> degrees(rotated.size());
        for (std::size_t i = 0; i < rotated.size(); ++i)
            degrees[i] = rotated[i] + 1;
        CHECK_NOTHROW(from_degrees(degrees));

        // exactly one rotation is an excursion
        int valid = 0;
        for (std::int64_t start = 0; start < len; ++start) {
            std::int64_t prefix = 0;
            bool ok = true;
            for (std::int64_t i = 0; i < len - 1; ++i) {
                prefix += inc[static_cast<std::size_t>((start + i) % len)];
                if (prefix < 0) {
                    ok = false;
                    break;
                }
            }
            if (ok) ++valid;
        }
        CHECK(valid == 1);
    }
}

namespace {

std::map<std::vector<NodeIndex>, double> oracle_shape_probs(const OffspringDistribution& dist,
                                                            std::int64_t n) {
    std::map<std::vector<NodeIndex>, double> shapes;
    double total = 0.0;
    enumerate_trees(dist, n, [&](const OrderedTree& t, double w) {
        shapes[t.degrees] = w;
        total += w;
    });
    for (auto& [degrees, w] : shapes) w /= total;
    return shapes;
}

}  // namespace

TEST_CASE("conditional samplers match the exact law (smoke scale)") {
    const auto dist = make_named("catalan");
    const std::int64_t n = 7;
    const auto shapes = oracle_shape_probs(dist, n);
    std::map<std::vector<NodeIndex>, std::size_t> index;
    std::vector<double> probs;
    for (const auto& [degrees, p] : shapes) {
        index[degrees] = probs.size();
        probs.push_back(p);
    }

    const int reps = 20000;
    MultisetSampler multiset(dist, n);
    std::vector<std::int64_t> counts_multiset(probs.size(), 0);
    std::vector<std::int64_t> counts_rejection(probs.size(), 0);
    for (int r = 0; r < reps; ++r) {
        Rng rng_m(substream_seed(11, static_cast<std::uint64_t>(r)));
        Rng rng_r(substream_seed(12, static_cast<std::uint64_t>(r)));
        ++counts_multiset[index.at(multiset.sample(rng_m).degrees)];
        ++counts_rejection[index.at(sample_conditional_rejection(dist, n, rng_r).degrees)];
    }
    CHECK(chi2_goodness_of_fit(counts_multiset, probs).p_value > 1e-4);
    CHECK(chi2_goodness_of_fit(counts_rejection, probs).p_value > 1e-4);
    CHECK(chi2_two_sample(counts_multiset, counts_rejection).p_value > 1e-4);
}

TEST_CASE("poisson multinomial sampler matches the exact law") {
    const auto poisson = make_named("poisson1");
    const auto shapes = oracle_shape_probs(poisson, 6);
    std::map<std::vector<NodeIndex>, std::size_t> index;
    std::vector<double> probs;
    for (const auto& [degrees, p] : shapes) {
        index[degrees] = probs.size();
        probs.push_back(p);
    }
    const int reps = 20000;
    std::vector<std::int64_t> counts_multinomial(probs.size(), 0);
    std::vector<std::int64_t> counts_rejection(probs.size(), 0);
    for (int r = 0; r < reps; ++r) {
        Rng rng_m(substream_seed(21, static_cast<std::uint64_t>(r)));
        Rng rng_r(substream_seed(22, static_cast<std::uint64_t>(r)));
        ++counts_multinomial[index.at(
            sample_conditional_poisson_multinomial(poisson, 6, rng_m).degrees)];
        ++counts_rejection[index.at(sample_conditional_rejection(poisson, 6, rng_r).degrees)];
    }
    CHECK(chi2_goodness_of_fit(counts_multinomial, probs).p_value > 1e-4);
    CHECK(chi2_two_sample(counts_multinomial, counts_rejection).p_value > 1e-4);

    Rng rng(5);
    CHECK(sample_conditional_poisson_multinomial(poisson, 1, rng).n() == 1);
    CHECK(sample_conditional_poisson_multinomial(poisson, 5000, rng).n() == 5000);
    CHECK_THROWS_AS(sample_conditional_poisson_multinomial(make_named("catalan"), 5, rng),
                    ConfigError);
}

TEST_CASE("conditional sampler basics") {
    const auto fb = make_named("full_binary");
    Rng rng(7);
    CHECK(sample_conditional_rejection(fb, 1, rng).n() == 1);
    CHECK(sample_conditional_multiset(fb, 1, rng).n() == 1);
    CHECK_THROWS_AS(sample_conditional_rejection(fb, 4, rng), DomainError);
    CHECK_THROWS_AS(sample_conditional_multiset(fb, 4, rng), DomainError);
    CHECK_THROWS_AS(MultisetSampler(make_named("poisson1"), 5), ConfigError);

    // forced counts: n = 2m+1 gives m twos; ternary n = 3m+1 gives m threes
    MultisetSampler fb_sampler(fb, 11);
    const auto t = fb_sampler.sample(rng);
    std::int64_t twos = 0, zeros = 0;
    for (NodeIndex d : t.degrees) (d == 2 ? twos : zeros) += 1;
    CHECK(twos == 5);
    CHECK(zeros == 6);

    MultisetSampler ternary_sampler(make_named("apollonian_ternary"), 10);
    const auto t3 = ternary_sampler.sample(rng);
    std::int64_t threes = 0;
    for (NodeIndex d : t3.degrees) threes += d == 3;
    CHECK(threes == 3);
}

TEST_CASE("catalan n=3 conditional weights") {
    // P(path) = (1/16)/(5/64) = 4/5, P(cherry) = 1/5
    const auto dist = make_named("catalan");
    MultisetSampler sampler(dist, 3);
    int path = 0;
    const int reps = 40000;
    for (int r = 0; r < reps; ++r) {
        Rng rng(substream_seed(99, static_cast<std::uint64_t>(r)));
        if (sampler.sample(rng).degrees[0] == 1) ++path;
    }
    const double freq = static_cast<double>(path) / reps;
    const double sigma = std::sqrt(0.8 * 0.2 / reps);
    CHECK(std::abs(freq - 0.8) <= 3.0 * sigma);
}

TEST_CASE("samplers are deterministic given the seed") {
    const auto dist = make_named("catalan");
    MultisetSampler sampler(dist, 50);
    Rng a(31337), b(31337), c(31338);
    const auto ta = sampler.sample(a);
    const auto tb = sampler.sample(b);
    const auto tc = sampler.sample(c);
    CHECK(ta.degrees == tb.degrees);
    CHECK(ta.degrees != tc.degrees);

    Rng ra(5), rb(5);
    CHECK(sample_conditional_rejection(dist, 20, ra).degrees ==
          sample_conditional_rejection(dist, 20, rb).degrees);
}

TEST_CASE("unconditional sampling") {
    const auto fb = make_named("full_binary");
    int singletons = 0;
    const int reps = 20000;
    for (int r = 0; r < reps; ++r) {
        Rng rng(substream_seed(808, static_cast<std::uint64_t>(r)));
        const auto result = sample_unconditional(fb, rng, 10000);
        if (const auto* tree = std::get_if<OrderedTree>(&result)) {
            CHECK(tree->n() % 2 == 1);  // span 2: sizes are odd
            if (tree->n() == 1) ++singletons;
        }
    }
    const double freq = static_cast<double>(singletons) / reps;
    const double sigma = std::sqrt(0.5 * 0.5 / reps);
    CHECK(std::abs(freq - 0.5) <= 3.0 * sigma);  // P(size = 1) = p_0 = 1/2

    Rng rng(1);
    const auto capped = sample_unconditional(fb, rng, 1);
    CHECK(std::holds_alternative<OrderedTree>(capped) ==
          (std::get_if<Overflow>(&capped) == nullptr));
}

TEST_CASE("unconditional size tail follows 2 alpha / (h sqrt(t))") {
    const auto catalan = make_named("catalan");
    const std::int64_t cap = 1000000;
    const int reps = 100000;
    std::vector<std::int64_t> sizes;
    sizes.reserve(reps);
    for (int r = 0; r < reps; ++r) {
        Rng rng(substream_seed(4242, static_cast<std::uint64_t>(r)));
        const auto result = sample_unconditional(catalan, rng, cap);
        if (const auto* tree = std::get_if<OrderedTree>(&result))
            sizes.push_back(tree->n());
        else
            sizes.push_back(std::get<Overflow>(result).size_at_least);
    }
    for (double t : {1e3, 1e4, 1e5}) {
        std::int64_t hits = 0;
        for (std::int64_t s : sizes) hits += s >= static_cast<std::int64_t>(t);
        const double level = static_cast<double>(hits) / reps * std::sqrt(t);
        const double target = 2.0 * catalan.alpha / static_cast<double>(catalan.span);
        CHECK(level == Approx(target).epsilon(0.15));
    }
}

TEST_CASE("size-biased (Kesten) tree, truncated") {
    const auto fb = make_named("full_binary");
    Rng rng(17);
    const auto trivial = sample_size_biased_truncated(fb, 0, rng);
    CHECK(trivial.tree.n() == 1);
    CHECK(trivial.spine == std::vector<NodeIndex>{0});

    for (int r = 0; r < 50; ++r) {
        Rng rr(substream_seed(33, static_cast<std::uint64_t>(r)));
        const auto sample = sample_size_biased_truncated(fb, 1, rr);
        CHECK(sample.tree.degrees[0] == 2);  // zeta is the point mass at 2
        CHECK(sample.spine.size() == 2);
        CHECK(sample.spine[0] == 0);
    }

    // spine is a root path: each spine node is the child of the previous
    const auto catalan = make_named("catalan");
    std::vector<std::int64_t> degree_counts(3, 0);
    const int reps = 30000;
    for (int r = 0; r < reps; ++r) {
        Rng rr(substream_seed(909, static_cast<std::uint64_t>(r)));
        const auto sample = sample_size_biased_truncated(catalan, 3, rr);
        REQUIRE(sample.spine.size() == 4);
        for (std::size_t i = 1; i < sample.spine.size(); ++i)
            CHECK(sample.tree.parent[static_cast<std::size_t>(sample.spine[i])] ==
                  sample.spine[i - 1]);
        ++degree_counts[static_cast<std::size_t>(
            sample.tree.degrees[static_cast<std::size_t>(sample.spine[1])])];
    }
    // spine node degree is size-biased: (0, 1/2, 1/2)
    std::vector<double> pmf(3);
    for (int i = 0; i < 3; ++i) pmf[static_cast<std::size_t>(i)] =
        static_cast<double>(degree_counts[static_cast<std::size_t>(i)]) / reps;
    CHECK(total_variation(pmf, size_biased(catalan)) < 0.02);
}
