#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gwheavy/apollonian.hpp"
#include "gwheavy/errors.hpp"
#include "gwheavy/experiment.hpp"
#include "gwheavy/heavy.hpp"
#include "gwheavy/limits.hpp"
#include "gwheavy/offspring.hpp"
#include "gwheavy/oracle.hpp"
#include "gwheavy/sampler.hpp"
#include "gwheavy/tree_io.hpp"
#include "gwheavy/version.hpp"

namespace gw {
namespace cli {

inline std::vector<double> parse_weights(const std::string& text) {
    std::vector<double> weights;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) weights.push_back(std::stod(item));
    return weights;
}

inline std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(std::stoll(item));
    return values;
}

inline OffspringDistribution resolve_dist(const std::string& name, const std::string& weights) {
    if (!weights.empty()) return from_weights(parse_weights(weights));
    return make_named(name);
}

inline std::pair<OrderedTree, GwTreeMeta> load_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open tree file '" + path + "'");
    return read_gwtree(in);
}

inline std::vector<double> load_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open input file '" + path + "'");
    std::vector<double> values;
    std::string token;
    while (in >> token) {
        std::stringstream ss(token);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) values.push_back(std::stod(item));
    }
    return values;
}

inline void write_or_print(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
        return;
    }
    std::ofstream file(path);
    if (!file) throw DomainError("cannot write to '" + path + "'");
    file << content;
}

inline ExperimentConfig config_from_json(const Json& j) {
    ExperimentConfig c = default_experiment_config(j.at("experiment").get<std::string>());
    if (j.contains("dist")) {
        if (j["dist"].is_array())
            c.weights = j["dist"].get<std::vector<double>>();
        else
            c.dist = j["dist"].get<std::string>();
    }
    if (j.contains("weights")) c.weights = j["weights"].get<std::vector<double>>();
    if (j.contains("sizes")) c.sizes = j["sizes"].get<std::vector<std::int64_t>>();
    if (j.contains("replications"))
        c.replications = j["replications"].get<std::vector<std::int64_t>>();
    if (j.contains("seed")) c.master_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("params"))
        for (const auto& [key, value] : j["params"].items()) c.params[key] = value.get<double>();
    if (j.contains("tolerances"))
        for (const auto& [key, value] : j["tolerances"].items())
            c.tolerances[key] = value.get<double>();
    return c;
}

// Entry point shared by the binary and the tests. Exit codes: 0 success,
// 2 usage or configuration error, 3 domain error, 4 resource guard.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{std::string(kVersion) +
                 " -- conditional Galton-Watson tree laboratory: exact samplers, heavy-path and "
                 "k-heavy decompositions, Apollonian networks, exact small-n oracles and "
                 "limit-law numerics"};
    app.require_subcommand(1);

    // ---- sample ----------------------------------------------------------
    std::string s_dist = "catalan", s_weights, s_method = "auto", s_out;
    std::int64_t s_n = 1;
    std::uint64_t s_seed = 0;
    auto* sample_cmd = app.add_subcommand(
        "sample",
        "Draw an exact conditional Galton-Watson tree of size n (cycle-lemma rotation of an "
        "exchangeable degree multiset; the Dwass identity P(|T|=n) = P(S_n=-1)/n governs the "
        "size law)");
    sample_cmd->add_option("--dist", s_dist, "named offspring law");
    sample_cmd->add_option("--weights", s_weights, "custom offspring weights p0,p1,...");
    sample_cmd->add_option("--n", s_n, "tree size (must lie in the size support I)")->required();
    sample_cmd->add_option("--seed", s_seed, "master seed")->required();
    sample_cmd->add_option("--method", s_method, "auto|multiset|rejection");
    sample_cmd->add_option("--out", s_out, "write gwtree file here instead of stdout");

    // ---- heavy -----------------------------------------------------------
    std::string h_in;
    std::int64_t h_k = 2;
    auto* heavy_cmd = app.add_subcommand(
        "heavy",
        "Heavy-path / k-heavy decomposition report: 2-heavy size B, heavy path length L and "
        "profile P, maximal distances to the k-heavy trees (the n^{1/(k+1)} scaling), and "
        "index-sequence pattern counts");
    heavy_cmd->add_option("--in", h_in, "gwtree input file")->required();
    heavy_cmd->add_option("--k", h_k, "k of the reported k-heavy tree size");
    std::string h_report = "json";
    heavy_cmd->add_option("--report", h_report, "report format (json)");

    // ---- fringe ----------------------------------------------------------
    std::string f_in, f_dist, f_weights;
    std::int64_t f_kmax = 8;
    auto* fringe_cmd = app.add_subcommand(
        "fringe",
        "Fringe subtree counts Z_k = #{v : N(v) = k}; with --dist, the exact means "
        "E[Z_k] = n P(S_k=-1) P(S_{n-k}=0) / (k P(S_n=-1)) for comparison (Aldous fringe limit)");
    fringe_cmd->add_option("--in", f_in, "gwtree input file")->required();
    fringe_cmd->add_option("--dist", f_dist, "offspring law for exact E[Z_k] columns");
    fringe_cmd->add_option("--weights", f_weights, "custom offspring weights");
    fringe_cmd->add_option("--kmax", f_kmax, "largest k for the exact mean columns");

    // ---- apollonian ------------------------------------------------------
    std::int64_t a_m = 1;
    std::uint64_t a_seed = 0;
    std::string a_path_out, a_edges_out;
    auto* apollonian_cmd = app.add_subcommand(
        "apollonian",
        "Uniform random Apollonian network via its ternary dual tree, plus a constructed long "
        "simple path (the 2-heavy subtree makes the longest simple path Omega(n))");
    apollonian_cmd->add_option("--m", a_m, "number of subdivisions")->required();
    apollonian_cmd->add_option("--seed", a_seed, "master seed")->required();
    apollonian_cmd->add_option("--emit-path", a_path_out, "write the path vertices to this file");
    apollonian_cmd->add_option("--emit-edges", a_edges_out, "write the edge list CSV to this file");

    // ---- oracle ----------------------------------------------------------
    std::string o_dist = "catalan", o_weights, o_stat, o_out, o_pattern;
    std::int64_t o_n = 1, o_k = 1, o_walk = -1, o_verify = -1;
    auto* oracle_cmd = app.add_subcommand(
        "oracle",
        "Exact small-n oracle: enumerates all weighted trees of size n for exact statistic "
        "laws, exports walk pmfs, and verifies the Dwass identity and the exact fringe moment "
        "formulas against enumeration");
    oracle_cmd->add_option("--dist", o_dist, "named offspring law");
    oracle_cmd->add_option("--weights", o_weights, "custom offspring weights");
    oracle_cmd->add_option("--n", o_n, "tree size (enumeration guard at 16)");
    oracle_cmd->add_option("--stat", o_stat,
                           "statistic: heavy_path_length two_heavy_size height z_k "
                           "max_distance_k n_k_root pattern:<spec>");
    oracle_cmd->add_option("--k", o_k, "k parameter for z_k, max_distance_k, n_k_root");
    oracle_cmd->add_option("--walk", o_walk, "export the exact pmf of S_m for this m as CSV");
    oracle_cmd->add_option("--verify-identities", o_verify,
                           "check enumeration against the closed formulas up to this n");
    oracle_cmd->add_option("--out", o_out, "output file (default stdout)");

    // ---- limits ----------------------------------------------------------
    auto* limits_cmd = app.add_subcommand(
        "limits",
        "Limit-law numerics: the Laplace exponent Phi(q) of the heavy fragmentation, moments "
        "E[T_inf^k] = k!/(Phi(1/2)...Phi(k/2)), the theta law of the rescaled height, and the "
        "superlevel-set heavy fragmentation of a tabulated excursion");
    double l_q = 0.5, l_x = 1.0, l_step = 1.0;
    std::int64_t l_k = 1;
    std::string l_in;
    auto* phi_cmd = limits_cmd->add_subcommand("phi", "Phi(q) by adaptive quadrature");
    phi_cmd->add_option("--q", l_q, "argument q > 0")->required();
    auto* moment_cmd = limits_cmd->add_subcommand("moment", "E[T_inf^k]");
    moment_cmd->add_option("--k", l_k, "moment order")->required();
    auto* theta_cmd = limits_cmd->add_subcommand("theta", "theta distribution CDF");
    theta_cmd->add_option("--x", l_x, "argument x > 0")->required();
    auto* frag_cmd = limits_cmd->add_subcommand(
        "frag", "heavy fragmentation trace of an excursion (largest superlevel component)");
    frag_cmd->add_option("--in", l_in, "excursion samples (CSV or whitespace)")->required();
    frag_cmd->add_option("--step", l_step, "level step");
    limits_cmd->require_subcommand(1);

    // ---- experiment ------------------------------------------------------
    std::string e_name, e_config, e_dist, e_weights, e_sizes, e_reps, e_out, e_raw;
    std::uint64_t e_seed = 1;
    bool e_seed_given = false;
    std::int64_t e_k = -1;
    std::vector<std::string> e_params, e_tols;
    auto* experiment_cmd = app.add_subcommand(
        "experiment",
        "Seeded parallel Monte Carlo catalog reproducing the scaling laws at desk scale: "
        "heavy-path moments against 2/sigma T_inf, the linear 2-heavy fraction, distance and "
        "subtree-maxima exponents, root tail exponents, fringe concentration, pattern growth, "
        "the theta height law, Apollonian long paths and the local size-biased limit");
    experiment_cmd->add_option("name", e_name, "experiment name (see catalog in --help-all)");
    experiment_cmd->add_option("--config", e_config, "JSON config file");
    experiment_cmd->add_option("--dist", e_dist, "override: named offspring law");
    experiment_cmd->add_option("--weights", e_weights, "override: custom weights");
    experiment_cmd->add_option("--sizes", e_sizes, "override: sizes n1,n2,...");
    experiment_cmd->add_option("--reps", e_reps, "override: replications r1,r2,...");
    auto* e_seed_opt = experiment_cmd->add_option(
        "--seed", e_seed, "master seed (stochastic runs refuse to start without one)");
    experiment_cmd->add_option("--k", e_k, "override: k parameter");
    experiment_cmd->add_option("--param", e_params, "extra parameter key=value (repeatable)");
    experiment_cmd->add_option("--tol", e_tols, "verdict tolerance key=value (repeatable)");
    experiment_cmd->add_option("--out", e_out, "write the JSON report here instead of stdout");
    experiment_cmd->add_option("--raw", e_raw, "write raw per-replication values as CSV");

    std::vector<const char*> argv;
    argv.push_back("gwheavy");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        e_seed_given = e_seed_opt->count() > 0;
    } catch (const CLI::CallForHelp&) {
        const CLI::App* deepest = &app;
        while (!deepest->get_subcommands().empty()) deepest = deepest->get_subcommands().front();
        out << deepest->help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*sample_cmd) {
            const auto dist = resolve_dist(s_dist, s_weights);
            Rng rng(s_seed);
            OrderedTree tree;
            if (s_method == "multiset")
                tree = sample_conditional_multiset(dist, s_n, rng);
            else if (s_method == "rejection")
                tree = sample_conditional_rejection(dist, s_n, rng);
            else if (s_method == "auto")
                tree = dist.support().size() <= 3 ? sample_conditional_multiset(dist, s_n, rng)
                                                  : sample_conditional_rejection(dist, s_n, rng);
            else
                throw ConfigError("unknown method '" + s_method + "'");
            GwTreeMeta meta{dist.name, s_seed};
            if (s_out.empty()) {
                write_gwtree(out, tree, meta);
            } else {
                std::ofstream file(s_out);
                if (!file) throw DomainError("cannot write to '" + s_out + "'");
                write_gwtree(file, tree, meta);
                Json j;
                j["version"] = kVersion;
                j["algorithm_id"] = Rng::algorithm_id;
                j["seed"] = s_seed;
                j["n"] = tree.n();
                j["dist"] = dist.name;
                j["out"] = s_out;
                out << j.dump(2) << "\n";
            }
        } else if (*heavy_cmd) {
            if (h_report != "json") throw ConfigError("only --report json is supported");
            const auto [tree, meta] = load_tree(h_in);
            const auto decomp = heavy_decomposition(tree);
            const auto profile = heavy_path(tree);
            Json j;
            j["version"] = kVersion;
            j["n"] = tree.n();
            j["dist"] = meta.dist;
            j["k"] = h_k;
            j["B"] = k_heavy_size(tree, decomp, h_k);
            j["L"] = profile.length();
            j["P"] = profile.sizes;
            j["maxdist"] = Json::object();
            for (std::int64_t k = 1; k <= 4; ++k)
                j["maxdist"][std::to_string(k)] = max_distance_to_k_heavy(tree, decomp, k);
            j["patterns"] = Json::object();
            j["patterns"]["heavy_path"] = pattern_count(tree, decomp, PatternSpec::heavy_path());
            for (std::int64_t k = 1; k <= 3; ++k)
                j["patterns"]["binary_blocks:" + std::to_string(k)] =
                    pattern_count(tree, decomp, PatternSpec::binary_blocks(k));
            j["patterns"]["all_ge2"] = pattern_count(tree, decomp, PatternSpec::all_ge2());
            out << j.dump(2) << "\n";
        } else if (*fringe_cmd) {
            const auto [tree, meta] = load_tree(f_in);
            const auto z = fringe_counts(tree);
            Json j;
            j["version"] = kVersion;
            j["n"] = tree.n();
            j["z"] = Json::array();
            for (std::size_t i = 0; i < z.size(); ++i)
                if (z[i] != 0) j["z"].push_back({static_cast<std::int64_t>(i + 1), z[i]});
            if (!f_dist.empty() || !f_weights.empty()) {
                const auto dist = resolve_dist(f_dist, f_weights);
                j["exact_mean"] = Json::array();
                const std::int64_t guard = std::max<std::int64_t>(tree.n(), 10000);
                if (tree.n() > 10000)
                    throw ResourceError("exact E[Z_k] columns are limited to n <= 10000");
                for (std::int64_t k = 1; k <= std::min<std::int64_t>(f_kmax, tree.n()); ++k)
                    j["exact_mean"].push_back({k, expected_zk(dist, tree.n(), k, guard).mean});
            }
            out << j.dump(2) << "\n";
        } else if (*apollonian_cmd) {
            Rng rng(a_seed);
            const auto net = sample_uniform_apollonian(a_m, rng);
            const auto path = heavy_simple_path(net);
            if (!a_edges_out.empty()) {
                std::ostringstream csv;
                csv << "u,v\n";
                for (const auto& [u, v] : net.edges) csv << u << "," << v << "\n";
                write_or_print(a_edges_out, csv.str(), out);
            }
            if (!a_path_out.empty()) {
                std::ostringstream txt;
                for (std::size_t i = 0; i < path.vertices.size(); ++i) {
                    if (i > 0) txt << ' ';
                    txt << path.vertices[i];
                }
                txt << "\n";
                write_or_print(a_path_out, txt.str(), out);
            }
            Json j;
            j["version"] = kVersion;
            j["algorithm_id"] = Rng::algorithm_id;
            j["seed"] = a_seed;
            j["m"] = a_m;
            j["num_vertices"] = net.num_vertices;
            j["num_edges"] = static_cast<std::int64_t>(net.edges.size());
            j["dual_size"] = net.dual.n();
            j["path_vertices"] = static_cast<std::int64_t>(path.vertices.size());
            j["selected_internal"] = path.selected_internal;
            j["verified"] = verify_simple_path(net, path.vertices);
            out << j.dump(2) << "\n";
        } else if (*oracle_cmd) {
            const auto dist = resolve_dist(o_dist, o_weights);
            if (o_verify >= 0) {
                const auto report = verify_identities(dist, o_verify);
                Json j;
                j["version"] = kVersion;
                j["dist"] = dist.name;
                j["nmax"] = o_verify;
                j["checks"] = report.checks;
                j["max_discrepancy"] = report.max_discrepancy;
                j["failures"] = report.failures;
                j["ok"] = report.ok();
                out << j.dump(2) << "\n";
            } else if (o_walk >= 0) {
                const auto pmf = walk_pmf(dist, o_walk);
                std::ostringstream csv;
                csv << "s,probability\n";
                for (std::size_t i = 0; i < pmf.values.size(); ++i)
                    if (pmf.values[i] > 0.0)
                        csv << (pmf.offset + static_cast<std::int64_t>(i)) << ","
                            << Json(pmf.values[i]).dump() << "\n";
                write_or_print(o_out, csv.str(), out);
            } else if (!o_stat.empty()) {
                const auto spec = StatisticSpec::parse(o_stat, o_k);
                const auto ed = exact_statistic_distribution(dist, o_n, spec);
                std::ostringstream csv;
                csv << "value,probability\n";
                for (std::size_t i = 0; i < ed.support.size(); ++i)
                    csv << ed.support[i] << "," << Json(ed.probs[i]).dump() << "\n";
                write_or_print(o_out, csv.str(), out);
            } else {
                throw ConfigError("oracle: pass --stat, --walk or --verify-identities");
            }
        } else if (*limits_cmd) {
            if (*phi_cmd) {
                out << Json(phi(l_q)).dump() << "\n";
            } else if (*moment_cmd) {
                out << Json(t_infinity_moment(l_k)).dump() << "\n";
            } else if (*theta_cmd) {
                out << Json(theta_cdf(l_x)).dump() << "\n";
            } else if (*frag_cmd) {
                const auto trace = heavy_fragmentation(load_series(l_in), l_step);
                Json j;
                j["version"] = kVersion;
                j["t_infinity"] = trace.t_infinity;
                j["levels"] = trace.levels;
                j["measures"] = trace.measures;
                out << j.dump(2) << "\n";
            }
        } else if (*experiment_cmd) {
            ExperimentConfig config;
            bool seed_from_config = false;
            if (!e_config.empty()) {
                std::ifstream in(e_config);
                if (!in) throw DomainError("cannot open config '" + e_config + "'");
                Json j = Json::parse(in);
                if (!e_name.empty()) j["experiment"] = e_name;
                config = config_from_json(j);
                seed_from_config = j.contains("seed");
            } else {
                if (e_name.empty()) throw ConfigError("experiment: give a name or --config");
                config = default_experiment_config(e_name);
            }
            if (!e_dist.empty()) config.dist = e_dist;
            if (!e_weights.empty()) config.weights = parse_weights(e_weights);
            if (!e_sizes.empty()) config.sizes = parse_int_list(e_sizes);
            if (!e_reps.empty()) config.replications = parse_int_list(e_reps);
            if (e_k >= 0) config.params["k"] = static_cast<double>(e_k);
            auto apply_kv = [](const std::vector<std::string>& kvs,
                              std::map<std::string, double>& target) {
                for (const auto& kv : kvs) {
                    const auto eq = kv.find('=');
                    if (eq == std::string::npos)
                        throw ConfigError("expected key=value, got '" + kv + "'");
                    target[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
                }
            };
            apply_kv(e_params, config.params);
            apply_kv(e_tols, config.tolerances);
            if (e_seed_given)
                config.master_seed = e_seed;
            else if (!seed_from_config)
                throw ConfigError("experiment: --seed is required (no silent nondeterminism)");

            const auto summary = run_experiment(config, !e_raw.empty());
            if (!e_raw.empty()) {
                std::ostringstream csv;
                csv << "size_index,n,replication,value0,value1,value2\n";
                for (std::size_t si = 0; si < summary.raw.size(); ++si)
                    for (std::size_t r = 0; r < summary.raw[si].size(); ++r)
                        csv << si << "," << summary.per_size[si].n << "," << r << ","
                            << Json(summary.raw[si][r][0]).dump() << ","
                            << Json(summary.raw[si][r][1]).dump() << ","
                            << Json(summary.raw[si][r][2]).dump() << "\n";
                std::ofstream raw_file(e_raw);
                if (!raw_file) throw DomainError("cannot write to '" + e_raw + "'");
                raw_file << csv.str();
            }
            write_or_print(e_out, summary.to_json().dump(2) + "\n", out);
        }
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const ResourceError& e) {
        err << "resource guard: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace cli
}  // namespace gw
