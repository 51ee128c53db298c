#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <variant>
#include <vector>

#include "gwheavy/errors.hpp"
#include "gwheavy/offspring.hpp"
#include "gwheavy/rng.hpp"
#include "gwheavy/tree.hpp"

namespace gw {

// Cycle lemma: a sequence of increments >= -1 summing to -1 has exactly one
// cyclic rotation whose proper prefix sums stay >= 0. Rotate to begin right
// after the leftmost position attaining the minimal prefix sum; the result
// is post-validated rather than trusted.
inline std::vector<NodeIndex> cycle_rotate(const std::vector<NodeIndex>& increments) {
    const std::int64_t n = static_cast<std::int64_t>(increments.size());
    std::int64_t sum = 0, min_sum = 0;
    std::int64_t min_pos = -1;
    for (std::int64_t i = 0; i < n; ++i) {
        if (increments[static_cast<std::size_t>(i)] < -1)
            throw DomainError("cycle_rotate: increment below -1 at position " + std::to_string(i + 1));
        sum += increments[static_cast<std::size_t>(i)];
        if (sum < min_sum) {
            min_sum = sum;
            min_pos = i;
        }
    }
    if (sum != -1)
        throw DomainError("cycle_rotate: increments sum to " + std::to_string(sum) + ", expected -1");

    const std::int64_t start = (min_pos + 1) % n;
    std::vector<NodeIndex> rotated(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        rotated[static_cast<std::size_t>(i)] =
            increments[static_cast<std::size_t>((start + i) % n)];

    std::int64_t check = 0;
    for (std::int64_t i = 0; i < n - 1; ++i) {
        check += rotated[static_cast<std::size_t>(i)];
        if (check < 0) throw InvariantError("cycle_rotate: rotation is not an excursion");
    }
    return rotated;
}

namespace detail {

inline OrderedTree tree_from_increments(std::vector<NodeIndex> increments) {
    std::vector<NodeIndex> degrees = cycle_rotate(increments);
    for (auto& d : degrees) d += 1;
    return from_degrees(std::move(degrees));
}

}  // namespace detail

// Conditional sampler by rejection: draw xi_1..xi_n i.i.d., accept when the
// total is n - 1, then rotate into tree position. Rotation classes carry
// uniform conditional weight, so the sample is exact. Expected number of
// attempts is Theta(sqrt(n)).
inline OrderedTree sample_conditional_rejection(const OffspringDistribution& dist, std::int64_t n,
                                                Rng& rng, std::int64_t attempt_budget = 10000000) {
    if (!size_in_support(dist, n)) throw size_not_in_support_error(dist, n);

    // inverse-CDF table over the support
    const auto support = dist.support();
    std::vector<double> cdf(support.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        acc += dist.probs[static_cast<std::size_t>(support[i])];
        cdf[i] = acc;
    }
    cdf.back() = 1.0 + dist.truncation_mass;

    std::vector<NodeIndex> increments(static_cast<std::size_t>(n));
    for (std::int64_t attempt = 0; attempt < attempt_budget; ++attempt) {
        std::int64_t sum = 0;
        for (std::int64_t i = 0; i < n; ++i) {
            const double u = rng.next_double();
            const std::size_t idx = static_cast<std::size_t>(
                std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            const NodeIndex inc = static_cast<NodeIndex>(support[std::min(idx, support.size() - 1)] - 1);
            increments[static_cast<std::size_t>(i)] = inc;
            sum += inc;
        }
        if (sum == -1) return detail::tree_from_increments(std::move(increments));
    }
    throw ResourceError("sample_conditional_rejection: attempt budget " +
                        std::to_string(attempt_budget) + " exhausted for n = " + std::to_string(n));
}

// Exact conditional sampler for laws whose support has at most three
// distinct values {0, a, b}. Conditioned on the total n - 1, the count of
// b-degrees is the only free parameter; its law is computed once in log
// space and reused across replications.
class MultisetSampler {
  public:
    MultisetSampler(const OffspringDistribution& dist, std::int64_t n) : n_(n) {
        if (!size_in_support(dist, n)) throw size_not_in_support_error(dist, n);
        const auto support = dist.support();
        if (support.size() > 3)
            throw ConfigError("multiset sampler supports at most 3 distinct degrees, '" +
                              dist.name + "' has " + std::to_string(support.size()));
        // support is {0} or {0, a} or {0, a, b}; p_0 > 0 holds for every
        // valid critical law with sigma^2 > 0
        a_ = support.size() > 1 ? support[1] : 0;
        b_ = support.size() > 2 ? support[2] : 0;
        const double log_p0 = std::log(dist.probs[0]);
        const double log_pa = a_ > 0 ? std::log(dist.probs[static_cast<std::size_t>(a_)]) : 0.0;
        const double log_pb = b_ > 0 ? std::log(dist.probs[static_cast<std::size_t>(b_)]) : 0.0;

        // enumerate feasible counts: j of degree b, c_a of degree a, rest leaves
        std::vector<double> logw;
        const std::int64_t jmax = b_ > 0 ? (n - 1) / b_ : 0;
        for (std::int64_t j = 0; j <= jmax; ++j) {
            const std::int64_t rest = (n - 1) - b_ * j;
            std::int64_t ca = 0;
            if (a_ > 0) {
                if (rest % a_ != 0) continue;
                ca = rest / a_;
            } else if (rest != 0) {
                continue;
            }
            const std::int64_t c0 = n - ca - j;
            if (c0 < 0) continue;
            const double lw = std::lgamma(static_cast<double>(n) + 1.0) -
                              std::lgamma(static_cast<double>(c0) + 1.0) -
                              std::lgamma(static_cast<double>(ca) + 1.0) -
                              std::lgamma(static_cast<double>(j) + 1.0) +
                              static_cast<double>(c0) * log_p0 + static_cast<double>(ca) * log_pa +
                              static_cast<double>(j) * log_pb;
            feasible_.push_back({j, ca, c0});
            logw.push_back(lw);
        }
        if (feasible_.empty()) throw InvariantError("multiset sampler: no feasible degree counts");

        const double peak = *std::max_element(logw.begin(), logw.end());
        cdf_.resize(logw.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < logw.size(); ++i) {
            acc += std::exp(logw[i] - peak);
            cdf_[i] = acc;
        }
        for (auto& c : cdf_) c /= acc;
        cdf_.back() = 1.0;
    }

    std::int64_t size() const { return n_; }

    OrderedTree sample(Rng& rng) const {
        const double u = rng.next_double();
        const std::size_t pick = static_cast<std::size_t>(
            std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
        const Counts& c = feasible_[std::min(pick, feasible_.size() - 1)];

        std::vector<NodeIndex> increments(static_cast<std::size_t>(n_));
        std::int64_t pos = 0;
        for (std::int64_t i = 0; i < c.c0; ++i) increments[static_cast<std::size_t>(pos++)] = -1;
        for (std::int64_t i = 0; i < c.ca; ++i)
            increments[static_cast<std::size_t>(pos++)] = static_cast<NodeIndex>(a_ - 1);
        for (std::int64_t i = 0; i < c.j; ++i)
            increments[static_cast<std::size_t>(pos++)] = static_cast<NodeIndex>(b_ - 1);
        // uniform shuffle of the degree multiset (Fisher-Yates)
        for (std::int64_t i = n_ - 1; i > 0; --i) {
            const std::int64_t k =
                static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
            std::swap(increments[static_cast<std::size_t>(i)], increments[static_cast<std::size_t>(k)]);
        }
        return detail::tree_from_increments(std::move(increments));
    }

  private:
    struct Counts {
        std::int64_t j, ca, c0;
    };
    std::int64_t n_;
    std::int64_t a_ = 0, b_ = 0;
    std::vector<Counts> feasible_;
    std::vector<double> cdf_;
};

inline OrderedTree sample_conditional_multiset(const OffspringDistribution& dist, std::int64_t n,
                                               Rng& rng) {
    return MultisetSampler(dist, n).sample(rng);
}

// Exact O(n) sampler for the Poisson(1) law: i.i.d. Poisson degrees
// conditioned on their total are multinomial, so throwing n - 1 balls into
// n boxes draws the conditioned degree vector directly (the truncation at
// 64 is unreachable at this scale). The vector is exchangeable, and the
// cycle rotation turns it into an exact conditional tree as usual.
inline OrderedTree sample_conditional_poisson_multinomial(const OffspringDistribution& dist,
                                                          std::int64_t n, Rng& rng) {
    if (dist.name != "poisson1")
        throw ConfigError("the multinomial sampler is specific to poisson1");
    if (n < 1) throw DomainError("sample_conditional_poisson_multinomial: n must be >= 1");
    std::vector<NodeIndex> increments(static_cast<std::size_t>(n), -1);
    for (std::int64_t ball = 0; ball < n - 1; ++ball)
        ++increments[static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(n)))];
    return detail::tree_from_increments(std::move(increments));
}

// Result of unconditional sampling: either the finished tree or the number
// of nodes already created when the cap was hit.
struct Overflow {
    std::int64_t size_at_least = 0;
};
using UnconditionalResult = std::variant<OrderedTree, Overflow>;

// Unconditional Galton-Watson tree, generated breadth first and halted at
// `cap` nodes. The heavy size tail P(|T| >= t) ~ 2 alpha / (h sqrt(t))
// makes an uncapped run unsafe.
inline UnconditionalResult sample_unconditional(const OffspringDistribution& dist, Rng& rng,
                                                std::int64_t cap = 10000000) {
    if (cap < 1) throw DomainError("sample_unconditional: cap must be >= 1");
    const auto support = dist.support();
    std::vector<double> cdf(support.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        acc += dist.probs[static_cast<std::size_t>(support[i])];
        cdf[i] = acc;
    }
    cdf.back() = 1.0 + dist.truncation_mass;

    std::vector<NodeIndex> bfs_degrees;
    std::int64_t created = 1;  // the root
    std::int64_t processed = 0;
    while (processed < created) {
        const double u = rng.next_double();
        const std::size_t idx =
            static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        const NodeIndex deg = static_cast<NodeIndex>(support[std::min(idx, support.size() - 1)]);
        bfs_degrees.push_back(deg);
        created += deg;
        ++processed;
        if (created >= cap && processed < created) return Overflow{created};
    }

    // convert breadth-first degrees to preorder
    const std::int64_t n = created;
    std::vector<std::int64_t> bfs_first_child(static_cast<std::size_t>(n));
    std::int64_t next = 1;
    for (std::int64_t i = 0; i < n; ++i) {
        bfs_first_child[static_cast<std::size_t>(i)] = next;
        next += bfs_degrees[static_cast<std::size_t>(i)];
    }
    std::vector<NodeIndex> degrees(static_cast<std::size_t>(n));
    std::vector<std::int64_t> stack{0};
    std::int64_t out = 0;
    while (!stack.empty()) {
        const std::int64_t v = stack.back();
        stack.pop_back();
        const NodeIndex deg = bfs_degrees[static_cast<std::size_t>(v)];
        degrees[static_cast<std::size_t>(out++)] = deg;
        for (NodeIndex c = deg - 1; c >= 0; --c)
            stack.push_back(bfs_first_child[static_cast<std::size_t>(v)] + c);
    }
    return from_degrees(std::move(degrees));
}

// Kesten tree truncated at max_depth: spine nodes draw from the size-biased
// law, their off-spine children root independent unconditional trees capped
// at the same depth, and the children of every spine node are uniformly
// permuted. Off-spine subtrees cut by the depth cap are flagged.
struct KestenSample {
    OrderedTree tree;
    std::vector<NodeIndex> spine;  // preorder indices, root first
    bool depth_censored = false;   // some off-spine subtree hit the cap
};

inline KestenSample sample_size_biased_truncated(const OffspringDistribution& dist,
                                                 std::int64_t max_depth, Rng& rng) {
    if (max_depth < 0) throw DomainError("sample_size_biased_truncated: max_depth must be >= 0");

    const auto biased = size_biased(dist);
    std::vector<double> biased_cdf(biased.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < biased.size(); ++i) {
        acc += biased[i];
        biased_cdf[i] = acc;
    }
    if (!biased_cdf.empty()) biased_cdf.back() = std::max(biased_cdf.back(), 1.0);

    const auto support = dist.support();
    std::vector<double> cdf(support.size());
    acc = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        acc += dist.probs[static_cast<std::size_t>(support[i])];
        cdf[i] = acc;
    }
    cdf.back() = 1.0 + dist.truncation_mass;

    // nodes are assembled with explicit child lists, then flattened
    struct Node {
        std::vector<std::int64_t> children;
        bool on_spine = false;
    };
    std::vector<Node> nodes;
    nodes.push_back({{}, true});
    bool censored = false;

    // grows an unconditional subtree under `root_id`, breadth first by level
    auto grow_unconditional = [&](std::int64_t root_id, std::int64_t root_depth) {
        std::vector<std::int64_t> level{root_id};
        std::int64_t depth = root_depth;
        while (!level.empty()) {
            if (depth == max_depth) {
                // nodes at the cap are forced into leaves
                censored = true;
                break;
            }
            std::vector<std::int64_t> next_level;
            for (std::int64_t id : level) {
                const double u = rng.next_double();
                const std::size_t idx = static_cast<std::size_t>(
                    std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
                const std::int64_t deg = support[std::min(idx, support.size() - 1)];
                for (std::int64_t c = 0; c < deg; ++c) {
                    nodes.push_back({{}, false});
                    nodes[static_cast<std::size_t>(id)].children.push_back(
                        static_cast<std::int64_t>(nodes.size()) - 1);
                    next_level.push_back(static_cast<std::int64_t>(nodes.size()) - 1);
                }
            }
            level.swap(next_level);
            ++depth;
        }
    };

    std::int64_t spine_id = 0;
    for (std::int64_t level = 0; level < max_depth; ++level) {
        // zeta from the size-biased law; zeta >= 1 always
        const double u = rng.next_double();
        const std::size_t zi = static_cast<std::size_t>(
            std::upper_bound(biased_cdf.begin(), biased_cdf.end(), u) - biased_cdf.begin());
        const std::int64_t zeta =
            static_cast<std::int64_t>(std::min(zi, biased_cdf.size() - 1));

        // push_back may reallocate `nodes`, so index instead of holding a
        // reference into it
        nodes.push_back({{}, true});
        const std::int64_t next_spine = static_cast<std::int64_t>(nodes.size()) - 1;
        nodes[static_cast<std::size_t>(spine_id)].children.push_back(next_spine);
        for (std::int64_t c = 0; c < zeta - 1; ++c) {
            nodes.push_back({{}, false});
            nodes[static_cast<std::size_t>(spine_id)].children.push_back(
                static_cast<std::int64_t>(nodes.size()) - 1);
        }
        // permute all children of the spine node
        {
            auto& children = nodes[static_cast<std::size_t>(spine_id)].children;
            for (std::int64_t i = static_cast<std::int64_t>(children.size()) - 1; i > 0; --i) {
                const std::int64_t k =
                    static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
                std::swap(children[static_cast<std::size_t>(i)],
                          children[static_cast<std::size_t>(k)]);
            }
        }
        const std::vector<std::int64_t> child_list =
            nodes[static_cast<std::size_t>(spine_id)].children;
        for (std::int64_t child : child_list)
            if (child != next_spine) grow_unconditional(child, level + 1);
        spine_id = next_spine;
    }

    // flatten to preorder
    KestenSample out;
    std::vector<NodeIndex> degrees;
    degrees.reserve(nodes.size());
    std::vector<std::int64_t> stack{0};
    std::vector<std::int64_t> preorder_of(nodes.size(), -1);
    while (!stack.empty()) {
        const std::int64_t v = stack.back();
        stack.pop_back();
        preorder_of[static_cast<std::size_t>(v)] = static_cast<std::int64_t>(degrees.size());
        const auto& ch = nodes[static_cast<std::size_t>(v)].children;
        degrees.push_back(static_cast<NodeIndex>(ch.size()));
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].on_spine)
            out.spine.push_back(static_cast<NodeIndex>(preorder_of[i]));
    std::sort(out.spine.begin(), out.spine.end());
    out.tree = from_degrees(std::move(degrees));
    out.depth_censored = censored;
    return out;
}

}  // namespace gw
