#pragma once

#include <array>
#include <atomic>
#include <cstdlib>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "gwheavy/apollonian.hpp"
#include "gwheavy/errors.hpp"
#include "gwheavy/heavy.hpp"
#include "gwheavy/limits.hpp"
#include "gwheavy/offspring.hpp"
#include "gwheavy/oracle.hpp"
#include "gwheavy/rng.hpp"
#include "gwheavy/sampler.hpp"
#include "gwheavy/stats.hpp"
#include "gwheavy/tree.hpp"
#include "gwheavy/version.hpp"

namespace gw {

using Json = nlohmann::ordered_json;

// A named Monte Carlo experiment over conditional Galton-Watson trees.
// Verdict tolerances are part of the configuration, not the code: the
// limit theorems fix exponents and limits but not rates, so every window
// is a visible calibration artifact.
struct ExperimentConfig {
    std::string experiment;
    std::string dist = "catalan";
    std::vector<double> weights;  // overrides `dist` when non-empty
    std::vector<std::int64_t> sizes;
    std::vector<std::int64_t> replications;  // per size; broadcast if single
    std::uint64_t master_seed = 1;
    std::map<std::string, double> params;
    std::map<std::string, double> tolerances;

    std::int64_t reps_for(std::size_t size_index) const {
        if (replications.empty()) throw ConfigError("experiment: replications missing");
        return replications.size() == 1 ? replications[0] : replications.at(size_index);
    }

    double param(const std::string& key, double fallback) const {
        const auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }

    double tolerance(const std::string& key, double fallback) const {
        const auto it = tolerances.find(key);
        return it == tolerances.end() ? fallback : it->second;
    }
};

struct Verdict {
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool pass = false;
    std::string calibration;  // "limit-law" or "pilot"
};

struct PerSizeSummary {
    std::int64_t n = 0;
    std::int64_t count = 0;
    SummaryStats primary;
    std::array<double, 5> quantiles{};  // 5/25/50/75/95%
    std::map<std::string, double> extras;
    std::vector<std::pair<double, double>> tail;  // (t, P(X >= t)) when used
};

struct McSummary {
    ExperimentConfig config;
    std::vector<PerSizeSummary> per_size;
    std::map<std::string, double> fits;
    std::map<std::string, Verdict> verdicts;
    std::vector<std::vector<std::array<double, 3>>> raw;  // per size when kept

    bool all_pass() const {
        for (const auto& [name, v] : verdicts)
            if (!v.pass) return false;
        return true;
    }

    Json to_json() const {
        Json j;
        j["version"] = kVersion;
        j["algorithm_id"] = Rng::algorithm_id;
        j["experiment"] = config.experiment;
        if (config.weights.empty())
            j["dist"] = config.dist;
        else
            j["dist"] = config.weights;
        j["seed"] = config.master_seed;
        j["params"] = config.params;
        j["tolerances"] = config.tolerances;
        j["per_n"] = Json::array();
        for (const auto& s : per_size) {
            Json row;
            row["n"] = s.n;
            row["count"] = s.count;
            row["mean"] = s.primary.mean;
            row["stderr"] = s.primary.stderror;
            row["quantiles"] = {{"p5", s.quantiles[0]},
                                {"p25", s.quantiles[1]},
                                {"p50", s.quantiles[2]},
                                {"p75", s.quantiles[3]},
                                {"p95", s.quantiles[4]}};
            row["extras"] = s.extras;
            if (!s.tail.empty()) {
                row["tail"] = Json::array();
                for (const auto& [t, p] : s.tail) row["tail"].push_back({t, p});
            }
            j["per_n"].push_back(std::move(row));
        }
        j["fits"] = fits;
        j["verdicts"] = Json::object();
        for (const auto& [name, v] : verdicts)
            j["verdicts"][name] = {{"value", v.value},
                                   {"lo", v.lo},
                                   {"hi", v.hi},
                                   {"pass", v.pass},
                                   {"calibration", v.calibration}};
        j["all_pass"] = all_pass();
        return j;
    }
};

namespace detail {

inline int resolve_thread_count() {
    if (const char* env = std::getenv("GWHEAVY_THREADS")) {
        const int t = std::atoi(env);
        if (t >= 1) return t;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Replication-indexed parallel loop. Results go to slots addressed by the
// replication index, so the outcome is identical for any worker count.
template <typename Body>
void parallel_replications(std::int64_t reps, const Body& body) {
    const int threads = resolve_thread_count();
    if (threads <= 1 || reps <= 1) {
        for (std::int64_t i = 0; i < reps; ++i) body(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&] {
        while (true) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= reps) break;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(reps);
                break;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

// Shared per-size sampling context: the multiset sampler when the support
// allows it (its count table is immutable and reused by all replications),
// the multinomial sampler for poisson1, rejection otherwise.
struct SizedSampler {
    const OffspringDistribution* dist;
    std::int64_t n;
    std::optional<MultisetSampler> multiset;
    bool poisson = false;

    SizedSampler(const OffspringDistribution& d, std::int64_t size) : dist(&d), n(size) {
        if (d.support().size() <= 3)
            multiset.emplace(d, size);
        else if (d.name == "poisson1")
            poisson = true;
    }

    OrderedTree sample(Rng& rng) const {
        if (multiset) return multiset->sample(rng);
        if (poisson) return sample_conditional_poisson_multinomial(*dist, n, rng);
        return sample_conditional_rejection(*dist, n, rng);
    }
};

inline std::vector<double> column(const std::vector<std::array<double, 3>>& slots, int j) {
    std::vector<double> out(slots.size());
    for (std::size_t i = 0; i < slots.size(); ++i) out[i] = slots[i][static_cast<std::size_t>(j)];
    return out;
}

inline void fill_quantiles(PerSizeSummary& s, std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const double ps[5] = {0.05, 0.25, 0.50, 0.75, 0.95};
    for (int i = 0; i < 5; ++i) s.quantiles[static_cast<std::size_t>(i)] = quantile_sorted(values, ps[i]);
}

}  // namespace detail

inline ExperimentConfig default_experiment_config(const std::string& name) {
    ExperimentConfig c;
    c.experiment = name;
    if (name == "heavy_path_moments") {
        c.dist = "full_binary";
        c.sizes = {1001, 10001, 100001, 1000001};
        c.replications = {10000, 10000, 2000, 400};
        c.tolerances = {{"final_mean_abs_tol", 0.15}, {"second_moment_rel_tol", 0.15}};
    } else if (name == "two_heavy_fraction") {
        c.dist = "apollonian_ternary";
        c.sizes = {300001};
        c.replications = {200};
        c.tolerances = {{"mean_min", 0.10}, {"mean_max", 0.67}, {"stdev_max", 0.02}};
    } else if (name == "distance_scaling") {
        // needs an offspring law with degrees above k, or the k-heavy tree
        // is everything; the three-point law {0,1,4} keeps the fast exact
        // sampler available at n = 10^6
        c.weights = {0.375, 0.5, 0.0, 0.0, 0.125};
        c.sizes = {1000, 10000, 100000, 1000000};
        c.replications = {500};
        c.params = {{"k", 2}};
        c.tolerances = {{"slope_min", 0.28}, {"slope_max", 0.39}};
    } else if (name == "nk_max_scaling") {
        c.dist = "apollonian_ternary";
        c.sizes = {1000, 10000, 100000, 1000000};
        c.replications = {500};
        c.params = {{"k", 3}};
        c.tolerances = {{"slope_min", 0.58}, {"slope_max", 0.76}};
    } else if (name == "nk_root_tail") {
        c.dist = "catalan";
        c.sizes = {100000};
        c.replications = {100000};
        c.params = {{"k", 2}, {"tail_min", 100}, {"tail_max", 10000}, {"tail_points", 9}};
        c.tolerances = {{"slope_min", -0.65}, {"slope_max", -0.35}};
    } else if (name == "zk_concentration") {
        c.dist = "catalan";
        c.sizes = {10000};
        c.replications = {2000};
        c.params = {{"k", 3}};
        c.tolerances = {{"ratio_tol", 0.05}};
    } else if (name == "pattern_growth") {
        c.dist = "catalan";
        c.sizes = {1000, 10000, 100000, 1000000};
        c.replications = {1000, 1000, 300, 100};
        c.tolerances = {{"heavy_slope_min", 0.44},
                        {"heavy_slope_max", 0.56},
                        {"blocks_slope_min", 0.48},
                        {"blocks_slope_max", 0.64}};
    } else if (name == "height_theta") {
        c.dist = "full_binary";
        c.sizes = {100001};
        c.replications = {10000};
        c.tolerances = {{"ks_max", 0.05}};
    } else if (name == "apollonian_path") {
        c.dist = "apollonian_ternary";
        c.sizes = {100000};  // subdivision counts m
        c.replications = {50};
        c.tolerances = {{"min_ratio", 0.05}};
    } else if (name == "local_limit") {
        c.dist = "catalan";
        c.sizes = {10000};
        c.replications = {10000};
        c.params = {{"trunc_j", 30}};
        c.tolerances = {{"tv_root_max", 0.05},
                        {"mean_deg_tol", 0.05},
                        {"tv_n2_max", 0.05},
                        {"tv_n3_max", 0.05}};
    } else {
        throw ConfigError(
            "unknown experiment '" + name +
            "'; catalog: heavy_path_moments two_heavy_fraction distance_scaling nk_max_scaling "
            "nk_root_tail zk_concentration pattern_growth height_theta apollonian_path local_limit");
    }
    return c;
}

inline std::vector<std::string> experiment_catalog() {
    return {"heavy_path_moments", "two_heavy_fraction", "distance_scaling", "nk_max_scaling",
            "nk_root_tail",       "zk_concentration",   "pattern_growth",   "height_theta",
            "apollonian_path",    "local_limit"};
}

// Runs an experiment: deterministic for a fixed config and master seed,
// independent of the worker count (one substream per replication, slot
// aggregation in replication order).
inline McSummary run_experiment(const ExperimentConfig& config, bool keep_raw = false) {
    const std::string& name = config.experiment;
    const OffspringDistribution dist =
        config.weights.empty() ? make_named(config.dist) : from_weights(config.weights);
    if (config.sizes.empty()) throw ConfigError("experiment: no sizes given");
    if (config.replications.size() != 1 && config.replications.size() != config.sizes.size())
        throw ConfigError("experiment: replications must match sizes (or be a single value)");
    for (std::size_t i = 0; i < config.sizes.size(); ++i)
        if (config.reps_for(i) < 1) throw ConfigError("experiment: replications must be >= 1");

    const bool sizes_are_subdivisions = name == "apollonian_path";
    if (!sizes_are_subdivisions) {
        for (std::int64_t n : config.sizes)
            if (!size_in_support(dist, n)) throw size_not_in_support_error(dist, n);
    } else {
        for (std::int64_t m : config.sizes)
            if (m < 1) throw DomainError("apollonian_path: m must be >= 1");
    }

    const std::int64_t k = static_cast<std::int64_t>(config.param("k", 2));
    const double sigma = std::sqrt(dist.sigma2);

    McSummary out;
    out.config = config;

    std::uint64_t substream_offset = 0;
    for (std::size_t si = 0; si < config.sizes.size(); ++si) {
        const std::int64_t n = config.sizes[si];
        const std::int64_t reps = config.reps_for(si);
        std::vector<std::array<double, 3>> slots(static_cast<std::size_t>(reps),
                                                 std::array<double, 3>{0.0, 0.0, 0.0});

        // per-size shared context, built before any worker starts
        std::optional<detail::SizedSampler> sampler;
        if (!sizes_are_subdivisions) sampler.emplace(dist, n);

        const std::uint64_t base = substream_offset;
        auto eval = [&](std::int64_t rep) {
            Rng rng(substream_seed(config.master_seed, base + static_cast<std::uint64_t>(rep)));
            auto& slot = slots[static_cast<std::size_t>(rep)];
            if (name == "heavy_path_moments") {
                const OrderedTree t = sampler->sample(rng);
                const std::int64_t L = heavy_path(t).length();
                if (L > height(t)) throw InvariantError("heavy path longer than the height");
                slot[0] = static_cast<double>(L) / std::sqrt(static_cast<double>(n));
            } else if (name == "two_heavy_fraction") {
                const OrderedTree t = sampler->sample(rng);
                const std::int64_t B = k_heavy_size(t, heavy_decomposition(t), 2);
                if (B > n) throw InvariantError("2-heavy tree larger than the tree");
                slot[0] = static_cast<double>(B) / static_cast<double>(n);
            } else if (name == "distance_scaling") {
                const OrderedTree t = sampler->sample(rng);
                const std::int64_t d = max_distance_to_k_heavy(t, heavy_decomposition(t), k);
                if (d > height(t)) throw InvariantError("distance exceeds the height");
                slot[0] = static_cast<double>(d);
            } else if (name == "nk_max_scaling") {
                const OrderedTree t = sampler->sample(rng);
                const auto maxima = max_kth_subtree(t, k);
                if (maxima.max_nk > n) throw InvariantError("subtree maximum exceeds n");
                slot[0] = static_cast<double>(maxima.max_nk);
            } else if (name == "nk_root_tail") {
                const OrderedTree t = sampler->sample(rng);
                const auto stats = subtree_order_stats(t, 0);
                const std::int64_t nk =
                    k <= static_cast<std::int64_t>(stats.size()) ? stats[static_cast<std::size_t>(k - 1)] : 0;
                if (nk >= n) throw InvariantError("root subtree as large as the tree");
                slot[0] = static_cast<double>(nk);
            } else if (name == "zk_concentration") {
                const OrderedTree t = sampler->sample(rng);
                std::int64_t z = 0;
                for (NodeIndex s : t.subtree_size)
                    if (s == k) ++z;
                slot[0] = static_cast<double>(z);
            } else if (name == "pattern_growth") {
                const OrderedTree t = sampler->sample(rng);
                const auto d = heavy_decomposition(t);
                const std::int64_t c_heavy = pattern_count(t, d, PatternSpec::heavy_path());
                const std::int64_t c_blocks = pattern_count(t, d, PatternSpec::binary_blocks(1));
                if (c_heavy - 1 != heavy_path(t).length())
                    throw InvariantError("heavy path pattern count mismatch");
                slot[0] = static_cast<double>(c_heavy);
                slot[1] = static_cast<double>(c_blocks);
            } else if (name == "height_theta") {
                const OrderedTree t = sampler->sample(rng);
                slot[0] = sigma * static_cast<double>(height(t)) /
                          std::sqrt(2.0 * static_cast<double>(n));
            } else if (name == "apollonian_path") {
                const ApollonianNetwork net = sample_uniform_apollonian(n, rng);
                const SimplePath path = heavy_simple_path(net);
                slot[0] = static_cast<double>(path.vertices.size()) / static_cast<double>(n);
                slot[1] = verify_simple_path(net, path.vertices) ? 1.0 : 0.0;
                slot[2] = static_cast<std::int64_t>(path.vertices.size()) ==
                                  path.selected_internal + 2
                              ? 1.0
                              : 0.0;
            } else if (name == "local_limit") {
                const OrderedTree t = sampler->sample(rng);
                const auto stats = subtree_order_stats(t, 0);
                slot[0] = static_cast<double>(t.degrees[0]);
                slot[1] = stats.size() >= 2 ? static_cast<double>(stats[1]) : 0.0;
                slot[2] = stats.size() >= 3 ? static_cast<double>(stats[2]) : 0.0;
            } else {
                throw ConfigError("unknown experiment '" + name + "'");
            }
        };
        detail::parallel_replications(reps, eval);
        substream_offset += static_cast<std::uint64_t>(reps);

        PerSizeSummary s;
        s.n = n;
        s.count = reps;
        const auto primary = detail::column(slots, 0);
        s.primary = summarize(primary);
        detail::fill_quantiles(s, primary);

        if (name == "heavy_path_moments") {
            std::vector<double> sq(primary.size()), cube(primary.size());
            for (std::size_t i = 0; i < primary.size(); ++i) {
                sq[i] = primary[i] * primary[i];
                cube[i] = sq[i] * primary[i];
            }
            const auto m2 = summarize(sq), m3 = summarize(cube);
            s.extras["moment2"] = m2.mean;
            s.extras["moment2_stderr"] = m2.stderror;
            s.extras["moment3"] = m3.mean;
            s.extras["moment3_stderr"] = m3.stderror;
        } else if (name == "pattern_growth") {
            const auto blocks = summarize(detail::column(slots, 1));
            s.extras["mean_blocks1"] = blocks.mean;
            s.extras["mean_blocks1_stderr"] = blocks.stderror;
        } else if (name == "apollonian_path") {
            double min_ratio = primary.empty() ? 0.0 : primary[0];
            double verified = 0.0, identity = 0.0;
            for (std::size_t i = 0; i < slots.size(); ++i) {
                min_ratio = std::min(min_ratio, slots[i][0]);
                verified += slots[i][1];
                identity += slots[i][2];
            }
            s.extras["min_ratio"] = min_ratio;
            s.extras["verified_fraction"] = verified / static_cast<double>(reps);
            s.extras["identity_fraction"] = identity / static_cast<double>(reps);
        } else if (name == "nk_root_tail") {
            const double tmin = config.param("tail_min", 100);
            const double tmax = config.param("tail_max", 10000);
            const int points = static_cast<int>(config.param("tail_points", 9));
            for (int i = 0; i < points; ++i) {
                const double t = tmin * std::pow(tmax / tmin, static_cast<double>(i) /
                                                                  static_cast<double>(points - 1));
                std::int64_t count = 0;
                for (double v : primary)
                    if (v >= t) ++count;
                s.tail.emplace_back(t, static_cast<double>(count) / static_cast<double>(reps));
            }
        } else if (name == "height_theta") {
            s.extras["ks"] = ks_distance(primary, [](double x) { return theta_cdf(x); });
        } else if (name == "zk_concentration") {
            const auto moments = expected_zk(dist, n, k, std::max<std::int64_t>(n, 10000));
            s.extras["expected_zk"] = moments.mean;
            s.extras["ratio"] = s.primary.mean / moments.mean;
        } else if (name == "local_limit") {
            const std::int64_t trunc = static_cast<std::int64_t>(config.param("trunc_j", 30));
            // empirical pmfs
            const auto empirical_pmf = [&](int col, std::int64_t cells) {
                std::vector<double> pmf(static_cast<std::size_t>(cells + 1), 0.0);
                for (const auto& slot : slots) {
                    const std::int64_t v = std::llround(slot[static_cast<std::size_t>(col)]);
                    pmf[static_cast<std::size_t>(std::min(v, cells))] += 1.0;
                }
                for (auto& p : pmf) p /= static_cast<double>(reps);
                return pmf;
            };
            const auto deg_pmf = empirical_pmf(0, dist.max_degree());
            s.extras["tv_root_degree"] = total_variation(deg_pmf, size_biased(dist));
            double mean_deg = 0.0;
            for (const auto& slot : slots) mean_deg += slot[0];
            s.extras["mean_root_degree"] = mean_deg / static_cast<double>(reps);

            // limit laws of N_2 and N_3: order statistics of zeta - 1
            // independent unconditional trees, truncated at trunc_j
            std::vector<double> size_cdf(static_cast<std::size_t>(trunc + 1), 0.0);
            {
                double acc = 0.0;
                for (std::int64_t j = 1; j <= trunc; ++j) {
                    acc += gw_total_size_pmf(dist, j);
                    size_cdf[static_cast<std::size_t>(j)] = acc;
                }
            }
            const auto biased = size_biased(dist);
            auto limit_pmf = [&](bool second_largest) {
                std::vector<double> pmf(static_cast<std::size_t>(trunc + 2), 0.0);
                auto cdf_at = [&](std::int64_t x) {
                    double f = 0.0;
                    for (std::size_t i = 0; i < biased.size(); ++i) {
                        const double q = size_cdf[static_cast<std::size_t>(std::min<std::int64_t>(x, trunc))];
                        const double men = static_cast<double>(i) - 1.0;  // zeta - 1
                        if (biased[i] == 0.0) continue;
                        double term;
                        if (!second_largest)
                            term = men <= 0.0 ? 1.0 : std::pow(q, men);
                        else
                            term = men <= 1.0 ? 1.0
                                              : std::pow(q, men) +
                                                    men * std::pow(q, men - 1.0) * (1.0 - q);
                        f += biased[i] * term;
                    }
                    return f;
                };
                double prev = 0.0;
                for (std::int64_t x = 0; x <= trunc; ++x) {
                    const double f = cdf_at(x);
                    pmf[static_cast<std::size_t>(x)] = f - prev;
                    prev = f;
                }
                pmf[static_cast<std::size_t>(trunc + 1)] = 1.0 - prev;  // overflow cell
                return pmf;
            };
            auto truncated_empirical = [&](int col) {
                std::vector<double> pmf(static_cast<std::size_t>(trunc + 2), 0.0);
                for (const auto& slot : slots) {
                    const std::int64_t v = std::llround(slot[static_cast<std::size_t>(col)]);
                    pmf[static_cast<std::size_t>(std::min(v, trunc + 1))] += 1.0;
                }
                for (auto& p : pmf) p /= static_cast<double>(reps);
                return pmf;
            };
            s.extras["tv_n2"] = total_variation(truncated_empirical(1), limit_pmf(false));
            s.extras["tv_n3"] = total_variation(truncated_empirical(2), limit_pmf(true));
        }

        out.per_size.push_back(std::move(s));
        if (keep_raw) out.raw.push_back(std::move(slots));
    }

    // fits and verdicts
    auto add_verdict = [&](const std::string& vname, double value, double lo, double hi,
                           const std::string& calibration) {
        out.verdicts[vname] = {value, lo, hi, value >= lo && value <= hi, calibration};
    };

    if (name == "heavy_path_moments") {
        // L_n / sqrt(n) -> (2/sigma) T_inf with all moments
        const double target_mean = 2.0 / sigma * t_infinity_moment(1);
        const double target_second = 2.0 / dist.sigma2 * t_infinity_moment(2);  // E[L^2/(2n)] limit
        bool monotone = true;
        for (std::size_t i = 0; i + 1 < out.per_size.size(); ++i) {
            const auto& a = out.per_size[i].primary;
            const auto& b = out.per_size[i + 1].primary;
            const double slack = 2.0 * std::sqrt(a.stderror * a.stderror + b.stderror * b.stderror);
            if (b.mean < a.mean - slack) monotone = false;
        }
        add_verdict("mean_monotone_within_2se", monotone ? 1.0 : 0.0, 1.0, 1.0, "limit-law");
        const auto& last = out.per_size.back();
        out.fits["target_mean"] = target_mean;
        out.fits["target_second_moment"] = target_second;
        out.fits["target_moment2"] = std::pow(2.0 / sigma, 2.0) * t_infinity_moment(2);
        out.fits["target_moment3"] = std::pow(2.0 / sigma, 3.0) * t_infinity_moment(3);
        add_verdict("final_mean_abs_error", std::abs(last.primary.mean - target_mean), 0.0,
                    config.tolerance("final_mean_abs_tol", 0.15), "pilot");
        const double second_scaled = last.extras.at("moment2") / 2.0;  // E[(L/sqrt(2n))^2]
        add_verdict("second_moment_rel_error",
                    std::abs(second_scaled - target_second) / target_second, 0.0,
                    config.tolerance("second_moment_rel_tol", 0.15), "pilot");
    } else if (name == "two_heavy_fraction") {
        double upper = 1.0;
        for (std::size_t i = 3; i < dist.probs.size(); ++i)
            upper -= (static_cast<double>(i) - 2.0) * dist.probs[i];
        out.fits["degree_upper_bound"] = upper;
        const auto& s = out.per_size.back();
        add_verdict("mean_fraction", s.primary.mean, config.tolerance("mean_min", 0.10),
                    config.tolerance("mean_max", 0.67), "pilot");
        add_verdict("stdev", s.primary.stddev, 0.0, config.tolerance("stdev_max", 0.02), "pilot");
    } else if (name == "distance_scaling" || name == "nk_max_scaling") {
        std::vector<std::pair<double, double>> points;
        for (const auto& s : out.per_size)
            points.emplace_back(static_cast<double>(s.n), s.primary.mean);
        const auto fit = fit_power_law(points);
        out.fits["slope"] = fit.slope;
        out.fits["intercept"] = fit.intercept;
        out.fits["r2"] = fit.r2;
        out.fits["target_slope"] =
            name == "distance_scaling" ? 1.0 / (static_cast<double>(k) + 1.0) : 2.0 / static_cast<double>(k);
        add_verdict("slope", fit.slope, config.tolerance("slope_min", 0.0),
                    config.tolerance("slope_max", 1.0), "pilot");
    } else if (name == "nk_root_tail") {
        std::vector<std::pair<double, double>> points;
        for (const auto& [t, p] : out.per_size.back().tail)
            if (p > 0.0) points.emplace_back(t, p);
        const auto fit = fit_power_law(points);
        out.fits["slope"] = fit.slope;
        out.fits["r2"] = fit.r2;
        out.fits["target_slope"] = (1.0 - static_cast<double>(k)) / 2.0;
        add_verdict("slope", fit.slope, config.tolerance("slope_min", -1.0),
                    config.tolerance("slope_max", 0.0), "pilot");
    } else if (name == "zk_concentration") {
        const auto& s = out.per_size.back();
        add_verdict("ratio_minus_one", std::abs(s.extras.at("ratio") - 1.0), 0.0,
                    config.tolerance("ratio_tol", 0.05), "pilot");
    } else if (name == "pattern_growth") {
        std::vector<std::pair<double, double>> heavy_points, blocks_points;
        for (const auto& s : out.per_size) {
            heavy_points.emplace_back(static_cast<double>(s.n), s.primary.mean);
            blocks_points.emplace_back(static_cast<double>(s.n), s.extras.at("mean_blocks1"));
        }
        const auto heavy_fit = fit_power_law(heavy_points);
        const auto blocks_fit = fit_power_law(blocks_points);
        out.fits["heavy_slope"] = heavy_fit.slope;
        out.fits["blocks1_slope"] = blocks_fit.slope;
        add_verdict("heavy_slope", heavy_fit.slope, config.tolerance("heavy_slope_min", 0.44),
                    config.tolerance("heavy_slope_max", 0.56), "pilot");
        add_verdict("blocks1_slope", blocks_fit.slope, config.tolerance("blocks_slope_min", 0.48),
                    config.tolerance("blocks_slope_max", 0.64), "pilot");
    } else if (name == "height_theta") {
        const auto& s = out.per_size.back();
        add_verdict("ks_distance", s.extras.at("ks"), 0.0, config.tolerance("ks_max", 0.05),
                    "pilot");
    } else if (name == "apollonian_path") {
        const auto& s = out.per_size.back();
        add_verdict("verified_fraction", s.extras.at("verified_fraction"), 1.0, 1.0, "limit-law");
        add_verdict("identity_fraction", s.extras.at("identity_fraction"), 1.0, 1.0, "limit-law");
        add_verdict("min_ratio", s.extras.at("min_ratio"), config.tolerance("min_ratio", 0.05),
                    1e9, "pilot");
    } else if (name == "local_limit") {
        const auto& s = out.per_size.back();
        add_verdict("tv_root_degree", s.extras.at("tv_root_degree"), 0.0,
                    config.tolerance("tv_root_max", 0.05), "pilot");
        add_verdict("mean_degree_error",
                    std::abs(s.extras.at("mean_root_degree") - (dist.sigma2 + 1.0)), 0.0,
                    config.tolerance("mean_deg_tol", 0.05), "pilot");
        add_verdict("tv_n2", s.extras.at("tv_n2"), 0.0, config.tolerance("tv_n2_max", 0.05),
                    "pilot");
        add_verdict("tv_n3", s.extras.at("tv_n3"), 0.0, config.tolerance("tv_n3_max", 0.05),
                    "pilot");
    }

    return out;
}

}  // namespace gw
