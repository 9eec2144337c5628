#include "rsp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rsp/analytics.hpp"
#include "rsp/clustering.hpp"
#include "rsp/heuristics.hpp"
#include "rsp/kmedian.hpp"
#include "rsp/metric.hpp"
#include "rsp/oracles.hpp"
#include "rsp/rng.hpp"

namespace rsp {
namespace {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// param parsing

class ParamReader {
public:
    explicit ParamReader(const std::map<std::string, std::string>& params) : params_(params) {}

    std::string get_string(const std::string& key, const std::string& def) {
        known_.insert(key);
        auto it = params_.find(key);
        return it == params_.end() ? def : it->second;
    }

    long get_long(const std::string& key, long def) {
        known_.insert(key);
        auto it = params_.find(key);
        if (it == params_.end()) return def;
        return parse_long(key, it->second);
    }

    int get_int(const std::string& key, int def) {
        return static_cast<int>(get_long(key, def));
    }

    double get_double(const std::string& key, double def) {
        known_.insert(key);
        auto it = params_.find(key);
        if (it == params_.end()) return def;
        return parse_double(key, it->second);
    }

    bool get_bool(const std::string& key, bool def) {
        known_.insert(key);
        auto it = params_.find(key);
        if (it == params_.end()) return def;
        const std::string& v = it->second;
        if (v == "1" || v == "true" || v == "yes") return true;
        if (v == "0" || v == "false" || v == "no") return false;
        throw ConfigError("param " + key + ": expected a boolean, got '" + v + "'");
    }

    std::vector<int> get_int_list(const std::string& key, std::vector<int> def) {
        known_.insert(key);
        auto it = params_.find(key);
        if (it == params_.end()) return def;
        std::vector<int> out;
        for (const std::string& piece : split(it->second))
            out.push_back(static_cast<int>(parse_long(key, piece)));
        if (out.empty()) throw ConfigError("param " + key + ": empty list");
        return out;
    }

    std::vector<double> get_double_list(const std::string& key, std::vector<double> def) {
        known_.insert(key);
        auto it = params_.find(key);
        if (it == params_.end()) return def;
        std::vector<double> out;
        for (const std::string& piece : split(it->second)) out.push_back(parse_double(key, piece));
        if (out.empty()) throw ConfigError("param " + key + ": empty list");
        return out;
    }

    bool has(const std::string& key) {
        known_.insert(key);
        return params_.count(key) > 0;
    }

    /// Reject params the experiment does not understand.
    void finish() const {
        for (const auto& [key, value] : params_)
            if (!known_.count(key))
                throw ConfigError("unknown param '" + key + "' for this experiment");
    }

private:
    static std::vector<std::string> split(const std::string& csv) {
        std::vector<std::string> out;
        std::string piece;
        std::istringstream in(csv);
        while (std::getline(in, piece, ','))
            if (!piece.empty()) out.push_back(piece);
        return out;
    }

    static long parse_long(const std::string& key, const std::string& v) {
        long value = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
        if (ec != std::errc() || ptr != v.data() + v.size())
            throw ConfigError("param " + key + ": expected an integer, got '" + v + "'");
        return value;
    }

    static double parse_double(const std::string& key, const std::string& v) {
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
        if (ec != std::errc() || ptr != v.data() + v.size())
            throw ConfigError("param " + key + ": expected a number, got '" + v + "'");
        return value;
    }

    const std::map<std::string, std::string>& params_;
    std::set<std::string> known_;
};

// ---------------------------------------------------------------------------
// series construction

struct SeriesSpec {
    std::string tuple;
    std::function<void(std::uint64_t, ExperimentRecord&)> run;
    // metadata consumed by verify_bounds
    int n = 0;
    int k = 0;
    int terms = 0;
    double delta = 0.0;
    double c = 0.0;
    bool lemma2 = false;
};

std::uint64_t weights_seed(std::uint64_t sub) { return derive_substream(sub, "weights"); }
std::uint64_t aux_seed(std::uint64_t sub) { return derive_substream(sub, "aux"); }
std::uint64_t sampler_seed(std::uint64_t sub) { return derive_substream(sub, "sampler"); }

RandomMetric trial_metric(int n, WeightDistribution dist, std::uint64_t sub) {
    return random_metric(n, dist, weights_seed(sub));
}

void push(ExperimentRecord& rec, const std::string& name, double value) {
    rec.stats.emplace_back(name, value);
}

enum class OracleMode { Auto, On, Off };

OracleMode oracle_mode(ParamReader& p) {
    std::string mode = p.get_string("oracle", "auto");
    if (mode == "auto") return OracleMode::Auto;
    if (mode == "on") return OracleMode::On;
    if (mode == "off") return OracleMode::Off;
    throw ConfigError("param oracle: expected auto|on|off, got '" + mode + "'");
}

WeightDistribution dist_param(ParamReader& p) {
    std::string d = p.get_string("dist", "exp");
    try {
        return weight_distribution_from_string(d);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

void skip_oracle(ExperimentRecord& rec, const std::string& why) {
    rec.skipped = true;
    rec.skip_reason = why;
}

std::string tuple_n(int n) { return "n=" + std::to_string(n); }

std::vector<SeriesSpec> build_tau_stats(const ExperimentConfig& cfg) {
    ParamReader p(cfg.params);
    WeightDistribution dist = dist_param(p);
    std::vector<int> ks = p.get_int_list("k", {2, 10, 50, 100});
    bool edge_pair = p.get_bool("edge_pair", false);
    p.finish();
    std::vector<SeriesSpec> series;
    for (int n : cfg.n_values) {
        for (int k : ks) {
            if (k < 1 || k > n)
                throw ConfigError("tau-stats: k=" + std::to_string(k) + " outside [1, n] for n=" +
                                  std::to_string(n));
            SeriesSpec s;
            s.tuple = tuple_n(n) + ";k=" + std::to_string(k);
            s.n = n;
            s.k = k;
            s.run = [n, k, dist, edge_pair](std::uint64_t sub, ExperimentRecord& rec) {
                // only rows of the metric are needed, so run single-source
                // passes instead of the full APSP
                WeightedGraph g = generate_weights(n, dist, weights_seed(sub));
                std::vector<double> dense = g.dense_weights();
                std::vector<double> row = dijkstra_row(dense, n, 0);
                std::sort(row.begin(), row.end());
                push(rec, "tau", row[k - 1]);
                if (edge_pair) {
                    Rng aux(aux_seed(sub));
                    int u = static_cast<int>(aux.below(n));
                    int v = static_cast<int>(aux.below(n - 1));
                    if (v >= u) ++v;
                    push(rec, "d_pair", dijkstra_row(dense, n, u)[v]);
                }
            };
            series.push_back(std::move(s));
        }
    }
    return series;
}

std::vector<SeriesSpec> build_cdf_sandwich(const ExperimentConfig& cfg) {
    ParamReader p(cfg.params);
    std::string mode = p.get_string("mode", "tau");
    double confidence = p.get_double("confidence", 0.99);
    int grid = p.get_int("grid", 32);
    if (confidence <= 0.0 || confidence >= 1.0)
        throw ConfigError("cdf-sandwich: confidence must be in (0,1)");
    if (grid < 1) throw ConfigError("cdf-sandwich: grid must be >= 1");
    std::vector<SeriesSpec> series;
    if (mode == "lemma2") {
        double c = p.get_double("c", 2.0);
        int terms = p.get_int("terms", 5);
        p.finish();
        if (c <= 0.0) throw ConfigError("cdf-sandwich: c must be > 0");
        if (terms < 1) throw ConfigError("cdf-sandwich: terms must be >= 1");
        SeriesSpec s;
        s.tuple = "c=" + format_double(c) + ";terms=" + std::to_string(terms);
        s.c = c;
        s.terms = terms;
        s.lemma2 = true;
        s.run = [c, terms](std::uint64_t sub, ExperimentRecord& rec) {
            Rng stream(sampler_seed(sub));
            push(rec, "sum_exp", sample_sum_exp_ci(terms, c, stream));
        };
        series.push_back(std::move(s));
    } else if (mode == "tau") {
        std::vector<int> ks = p.get_int_list("k", {10});
        p.finish();
        for (int n : cfg.n_values) {
            for (int k : ks) {
                if (k < 1 || k > n)
                    throw ConfigError("cdf-sandwich: k outside [1, n]");
                SeriesSpec s;
                s.tuple = tuple_n(n) + ";k=" + std::to_string(k);
                s.n = n;
                s.k = k;
                s.run = [n, k](std::uint64_t sub, ExperimentRecord& rec) {
                    Rng stream(sampler_seed(sub));
                    push(rec, "tau_direct", sample_tau_direct(n, k, stream));
                };
                series.push_back(std::move(s));
            }
        }
    } else {
        throw ConfigError("cdf-sandwich: mode must be tau or lemma2");
    }
    return series;
}

std::vector<SeriesSpec> build_ball_tails(const ExperimentConfig& cfg) {
    ParamReader p(cfg.params);
    std::vector<double> deltas = p.get_double_list("delta", {0.1});
    double c = p.get_double("c", 2.0);
    p.get_double("slack", 3.0); // consumed by verify
    p.finish();
    if (c <= 1.0) throw ConfigError("ball-tails: c must be > 1");
    std::vector<SeriesSpec> series;
    for (int n : cfg.n_values) {
        if (n < 5) throw ConfigError("ball-tails: n must be >= 5");
        for (double delta : deltas) {
            if (delta < 0.0) throw ConfigError("ball-tails: delta must be >= 0");
            SeriesSpec s;
            s.tuple = tuple_n(n) + ";delta=" + format_double(delta);
            s.n = n;
            s.delta = delta;
            s.c = c;
            s.run = [n, delta, c](std::uint64_t sub, ExperimentRecord& rec) {
                WeightedGraph g =
                    generate_weights(n, WeightDistribution::Exponential1, weights_seed(sub));
                std::vector<double> row = single_source_distances(g, 0);
                int size = 0;
                for (double d : row)
                    if (d <= delta) ++size;
                double thr_small = s_delta(n, delta);
                double thr_large = std::exp(std::min(c * delta * n, 700.0));
                push(rec, "ball_size", size);
                push(rec, "below_s", size < thr_small ? 1.0 : 0.0);
                push(rec, "above_c", size >= thr_large ? 1.0 : 0.0);
            };
            series.push_back(std::move(s));
        }
    }
    return series;
}

std::vector<SeriesSpec> build_cluster_curve(const ExperimentConfig& cfg) {
    ParamReader p(cfg.params);
    bool has_delta = p.has("delta");
    std::vector<double> fixed_deltas = p.get_double_list("delta", {});
    int imax = p.get_int("imax", 20);
    p.finish();
    if (imax < 0) throw ConfigError("cluster-curve: imax must be >= 0");
    std::vector<SeriesSpec> series;
    for (int n : cfg.n_values) {
        std::vector<double> deltas = fixed_deltas;
        if (!has_delta) {
            deltas.clear();
            for (int i = 0; i <= imax; ++i) deltas.push_back(static_cast<double>(i) / n);
        }
        for (double d : deltas)
            if (d < 0.0) throw ConfigError("cluster-curve: delta must be >= 0");
        SeriesSpec s;
        s.tuple = tuple_n(n);
        s.n = n;
        s.run = [n, deltas](std::uint64_t sub, ExperimentRecord& rec) {
            RandomMetric m = trial_metric(n, WeightDistribution::Exponential1, sub);
            for (double delta : deltas) {
                ClusteringResult r = build_clusters(m, delta);
                ClusteringCheck check = verify_clustering(m, r);
                push(rec, "count@" + format_double(delta), r.cluster_count());
                push(rec, "inv_ok@" + format_double(delta), check.all_ok() ? 1.0 : 0.0);
            }
        };
        series.push_back(std::move(s));
    }
    return series;
}

std::vector<SeriesSpec> build_matching(const ExperimentConfig& cfg) {
    ParamReader p(cfg.params);
    OracleMode mode = oracle_mode(p);
    p.finish();
    std::vector<SeriesSpec> series;
    for (int n : cfg.n_values) {
        if (n % 2 != 0) throw ConfigError("matching: n must be even");
        if (mode == OracleMode::On && n > 20)
            throw ConfigError("matching: oracle=on requires n <= 20");
        SeriesSpec s;
        s.tuple = tuple_n(n);
        s.n = n;
        s.run = [n, mode](std::uint64_t sub, ExperimentRecord& rec) {
            RandomMetric m = trial_metric(n, WeightDistribution::Exponential1, sub);
            MatchingResult greedy = greedy_matching(m);
            push(rec, "length", greedy.total_length);
            if (mode == OracleMode::Off) return;
            if (n > 20) {
                skip_oracle(rec, "exact matching needs n <= 20");
                return;
            }
            double exact = exact_min_matching(m).value;
            push(rec, "exact", exact);
            push(rec, "ratio", greedy.total_length / exact);
        };
        series.push_back(std::move(s));
    }
    return series;
}

std::vector<SeriesSpec> build_nn(const ExperimentConfig& cfg) {
    ParamReader p(cfg.params);
    OracleMode mode = oracle_mode(p);
    int start = p.get_int("start", 0);
    p.finish();
    std::vector<SeriesSpec> series;
    for (int n : cfg.n_values) {
        if (start < 0 || start >= n) throw ConfigError("nn: start must be in [0, n)");
        if (mode == OracleMode::On && (n < 3 || n > 18))
            throw ConfigError("nn: oracle=on requires 3 <= n <= 18");
        SeriesSpec s;
        s.tuple = tuple_n(n);
        s.n = n;
        s.run = [n, start, mode](std::uint64_t sub, ExperimentRecord& rec) {
            RandomMetric m = trial_metric(n, WeightDistribution::Exponential1, sub);
            TourResult tour = nearest_neighbor_tour(m, start);
            push(rec, "length", tour.total_length);
            if (mode == OracleMode::Off) return;
            if (n < 3 || n > 18) {
                skip_oracle(rec, "exact tour needs 3 <= n <= 18");
                return;
            }
            double exact = held_karp_tsp(m).value;
            push(rec, "exact", exact);
            push(rec, "ratio", tour.total_length / exact);
        };
        series.push_back(std::move(s));
    }
    return series;
}

std::vector<SeriesSpec> build_insertion(const ExperimentConfig& cfg) {
    ParamReader p(cfg.params);
    OracleMode mode = oracle_mode(p);
    std::string rule_param = p.get_string("rule", "all");
    p.finish();
    std::vector<InsertionRule> rules;
    if (rule_param == "all") {
        rules = {InsertionRule::Nearest, InsertionRule::Farthest, InsertionRule::Cheapest,
                 InsertionRule::Random, InsertionRule::FixedOrder};
    } else {
        std::istringstream in(rule_param);
        std::string piece;
        while (std::getline(in, piece, ',')) {
            try {
                rules.push_back(insertion_rule_from_string(piece));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
        if (rules.empty()) throw ConfigError("insertion: empty rule list");
    }
    std::vector<SeriesSpec> series;
    for (int n : cfg.n_values) {
        if (mode == OracleMode::On && (n < 3 || n > 18))
            throw ConfigError("insertion: oracle=on requires 3 <= n <= 18");
        for (InsertionRule rule : rules) {
            SeriesSpec s;
            s.tuple = tuple_n(n) + ";rule=" + to_string(rule);
            s.n = n;
            s.run = [n, rule, mode](std::uint64_t sub, ExperimentRecord& rec) {
                RandomMetric m = trial_metric(n, WeightDistribution::Exponential1, sub);
                Rng aux(aux_seed(sub));
                TourResult tour = insertion_tour(m, rule, &aux);
                push(rec, "length", tour.total_length);
                if (mode == OracleMode::Off) return;
                if (n < 3 || n > 18) {
                    skip_oracle(rec, "exact tour needs 3 <= n <= 18");
                    return;
                }
                double exact = held_karp_tsp(m).value;
                push(rec, "exact", exact);
                push(rec, "ratio", tour.total_length / exact);
            };
            series.push_back(std::move(s));
        }
    }
    return series;
}

std::vector<SeriesSpec> build_two_opt(const ExperimentConfig& cfg) {
    ParamReader p(cfg.params);
    PivotRule pivot;
    try {
        pivot = pivot_rule_from_string(p.get_string("pivot", "first-improvement"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    long max_iters = p.get_long("max_iters", 10'000'000L);
    p.finish();
    if (max_iters < 0) throw ConfigError("two-opt: max_iters must be >= 0");
    std::vector<SeriesSpec> series;
    for (int n : cfg.n_values) {
        SeriesSpec s;
        s.tuple = tuple_n(n);
        s.n = n;
        s.run = [n, pivot, max_iters](std::uint64_t sub, ExperimentRecord& rec) {
            RandomMetric m = trial_metric(n, WeightDistribution::Exponential1, sub);
            Rng aux(aux_seed(sub));
            TourResult initial = random_tour(m, aux);
            TourResult local = two_opt(m, initial, pivot, max_iters);
            push(rec, "initial_length", initial.total_length);
            push(rec, "length", local.total_length);
            push(rec, "T", static_cast<double>(local.meta.iterations));
            push(rec, "delta_min", local.meta.min_improvement);
            push(rec, "locally_optimal", local.meta.locally_optimal ? 1.0 : 0.0);
            push(rec, "cert_ok", best_two_opt_gain(m, local.order) <= 1e-12 ? 1.0 : 0.0);
            if (n % 2 == 0)
                push(rec, "s_half", sorted_weight_prefix(m.source_graph, n / 2));
        };
        series.push_back(std::move(s));
    }
    return series;
}

std::vector<SeriesSpec> build_kmedian(const ExperimentConfig& cfg) {
    ParamReader p(cfg.params);
    OracleMode mode = oracle_mode(p);
    std::vector<int> ks = p.get_int_list("k", {2});
    std::string variant = p.get_string("variant", "fixed");
    p.finish();
    if (variant != "fixed" && variant != "random" && variant != "direct")
        throw ConfigError("kmedian: variant must be fixed|random|direct");
    auto budget_ok = [](int n, int k) {
        double log_c = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        return log_c <= std::log(1e6);
    };
    std::vector<SeriesSpec> series;
    for (int n : cfg.n_values) {
        for (int k : ks) {
            if (k < 1 || k > n) throw ConfigError("kmedian: k outside [1, n]");
            if (mode == OracleMode::On && !budget_ok(n, k))
                throw ConfigError("kmedian: oracle=on requires C(n,k) <= 10^6");
            SeriesSpec s;
            s.tuple = tuple_n(n) + ";k=" + std::to_string(k) + ";variant=" + variant;
            s.n = n;
            s.k = k;
            if (variant == "direct") {
                s.run = [n, k](std::uint64_t sub, ExperimentRecord& rec) {
                    Rng stream(sampler_seed(sub));
                    push(rec, "cost_direct", sample_cost_direct(n, k, stream));
                };
            } else {
                bool random_variant = variant == "random";
                bool oracle_capable = budget_ok(n, k);
                bool want_oracle = mode != OracleMode::Off && oracle_capable;
                s.run = [n, k, random_variant, mode, oracle_capable,
                         want_oracle](std::uint64_t sub, ExperimentRecord& rec) {
                    if (want_oracle) {
                        RandomMetric m = trial_metric(n, WeightDistribution::Exponential1, sub);
                        Rng aux(aux_seed(sub));
                        KMedianResult res =
                            trivial_kmedian(m, k,
                                            random_variant ? KMedianVariant::TrivialRandom
                                                           : KMedianVariant::TrivialFixed,
                                            &aux);
                        push(rec, "cost", res.cost);
                        double exact = exact_kmedian(m, k).value;
                        push(rec, "exact", exact);
                        push(rec, "ratio", res.cost / exact);
                        return;
                    }
                    // cost needs the rows of the chosen centers only
                    WeightedGraph g = generate_weights(n, WeightDistribution::Exponential1,
                                                       weights_seed(sub));
                    Rng aux(aux_seed(sub));
                    std::vector<int> chosen(k);
                    if (random_variant) {
                        std::vector<int> pool(n);
                        std::iota(pool.begin(), pool.end(), 0);
                        for (int i = 0; i < k; ++i) {
                            int j = i + static_cast<int>(
                                            aux.below(static_cast<std::uint64_t>(n - i)));
                            std::swap(pool[i], pool[j]);
                        }
                        chosen.assign(pool.begin(), pool.begin() + k);
                        std::sort(chosen.begin(), chosen.end());
                    } else {
                        std::iota(chosen.begin(), chosen.end(), 0);
                    }
                    std::vector<double> dense = g.dense_weights();
                    std::vector<double> nearest(n,
                                                std::numeric_limits<double>::infinity());
                    for (int u : chosen) {
                        std::vector<double> row = dijkstra_row(dense, n, u);
                        for (int v = 0; v < n; ++v)
                            if (row[v] < nearest[v]) nearest[v] = row[v];
                    }
                    double cost = 0.0;
                    for (int v = 0; v < n; ++v) cost += nearest[v];
                    push(rec, "cost", cost);
                    if (mode != OracleMode::Off && !oracle_capable)
                        skip_oracle(rec, "exact k-median needs C(n,k) <= 10^6");
                };
            }
            series.push_back(std::move(s));
        }
    }
    return series;
}

std::vector<SeriesSpec> build_diameter(const ExperimentConfig& cfg) {
    ParamReader p(cfg.params);
    double c = p.get_double("c", 4.0);
    p.get_double("slack", 10.0); // consumed by verify
    p.finish();
    if (c <= 3.0) throw ConfigError("diameter: c must be > 3");
    std::vector<SeriesSpec> series;
    for (int n : cfg.n_values) {
        SeriesSpec s;
        s.tuple = tuple_n(n);
        s.n = n;
        s.c = c;
        s.run = [n, c](std::uint64_t sub, ExperimentRecord& rec) {
            RandomMetric m = trial_metric(n, WeightDistribution::Exponential1, sub);
            double dmax = diameter(m);
            double scale = std::log(static_cast<double>(n)) / n;
            push(rec, "dmax", dmax);
            push(rec, "normalized", dmax / scale);
            push(rec, "exceed", dmax > c * scale ? 1.0 : 0.0);
        };
        series.push_back(std::move(s));
    }
    return series;
}

std::vector<SeriesSpec> build_oracle_crosscheck(const ExperimentConfig& cfg) {
    ParamReader p(cfg.params);
    int apsp_n = p.get_int("apsp_n", 64);
    int tsp_n = p.get_int("tsp_n", 8);
    int matching_n = p.get_int("matching_n", 8);
    int kmedian_n = p.get_int("kmedian_n", 10);
    int kmedian_k = p.get_int("kmedian_k", 2);
    std::string checks = p.get_string("checks", "apsp,tsp,matching,kmedian");
    p.finish();
    if (apsp_n < 2 || apsp_n > 256) throw ConfigError("oracle-crosscheck: apsp_n must be in [2,256]");
    if (tsp_n < 3 || tsp_n > 10) throw ConfigError("oracle-crosscheck: tsp_n must be in [3,10]");
    if (matching_n < 2 || matching_n > 12 || matching_n % 2 != 0)
        throw ConfigError("oracle-crosscheck: matching_n must be even and <= 12");
    if (kmedian_k < 1 || kmedian_k > kmedian_n)
        throw ConfigError("oracle-crosscheck: kmedian_k outside [1, kmedian_n]");

    std::vector<SeriesSpec> series;
    std::istringstream in(checks);
    std::string check;
    while (std::getline(in, check, ',')) {
        SeriesSpec s;
        s.tuple = "check=" + check;
        if (check == "apsp") {
            s.run = [apsp_n](std::uint64_t sub, ExperimentRecord& rec) {
                WeightedGraph g =
                    generate_weights(apsp_n, WeightDistribution::Exponential1, weights_seed(sub));
                RandomMetric fast = all_pairs_shortest_paths(g);
                RandomMetric slow = full_relaxation_apsp(g);
                double worst = 0.0;
                for (std::size_t i = 0; i < fast.dist.size(); ++i)
                    worst = std::max(worst, std::abs(fast.dist[i] - slow.dist[i]));
                push(rec, "max_abs_diff", worst);
            };
        } else if (check == "tsp") {
            s.run = [tsp_n](std::uint64_t sub, ExperimentRecord& rec) {
                RandomMetric m = trial_metric(tsp_n, WeightDistribution::Exponential1, sub);
                push(rec, "abs_diff",
                     std::abs(held_karp_tsp(m).value - exhaustive_perm_tsp(m).value));
            };
        } else if (check == "matching") {
            s.run = [matching_n](std::uint64_t sub, ExperimentRecord& rec) {
                RandomMetric m = trial_metric(matching_n, WeightDistribution::Exponential1, sub);
                push(rec, "abs_diff",
                     std::abs(exact_min_matching(m).value - exhaustive_matching(m).value));
            };
        } else if (check == "kmedian") {
            s.run = [kmedian_n, kmedian_k](std::uint64_t sub, ExperimentRecord& rec) {
                RandomMetric m = trial_metric(kmedian_n, WeightDistribution::Exponential1, sub);
                push(rec, "abs_diff", std::abs(exact_kmedian(m, kmedian_k).value -
                                               exact_kmedian_swapped(m, kmedian_k).value));
            };
        } else {
            throw ConfigError("oracle-crosscheck: unknown check '" + check + "'");
        }
        series.push_back(std::move(s));
    }
    if (series.empty()) throw ConfigError("oracle-crosscheck: empty check list");
    return series;
}

std::vector<SeriesSpec> build_series(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    if (cfg.n_values.empty()) throw ConfigError("need at least one n");
    for (int n : cfg.n_values)
        if (n < 2) throw ConfigError("n must be >= 2");
    if (cfg.workers < 0) throw ConfigError("workers must be >= 0");

    if (cfg.experiment == "tau-stats") return build_tau_stats(cfg);
    if (cfg.experiment == "cdf-sandwich") return build_cdf_sandwich(cfg);
    if (cfg.experiment == "ball-tails") return build_ball_tails(cfg);
    if (cfg.experiment == "cluster-curve") return build_cluster_curve(cfg);
    if (cfg.experiment == "matching") return build_matching(cfg);
    if (cfg.experiment == "nn") return build_nn(cfg);
    if (cfg.experiment == "insertion") return build_insertion(cfg);
    if (cfg.experiment == "two-opt") return build_two_opt(cfg);
    if (cfg.experiment == "kmedian") return build_kmedian(cfg);
    if (cfg.experiment == "diameter") return build_diameter(cfg);
    if (cfg.experiment == "oracle-crosscheck") return build_oracle_crosscheck(cfg);
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

// ---------------------------------------------------------------------------
// runner

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    int threads = static_cast<int>(std::min<std::size_t>(workers, count));
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::string csv_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "tau-stats", "cdf-sandwich", "ball-tails",       "cluster-curve",
        "matching",  "nn",           "insertion",        "two-opt",
        "kmedian",   "diameter",     "oracle-crosscheck"};
    return names;
}

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return std::string(buf, ptr);
}

void validate_config(const ExperimentConfig& cfg) { build_series(cfg); }

const SummaryRow* ExperimentResult::find_summary(const std::string& tuple,
                                                 const std::string& stat) const {
    for (const SummaryRow& row : summary)
        if (row.param_tuple == tuple && row.statistic == stat) return &row;
    return nullptr;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    std::vector<SeriesSpec> series = build_series(cfg);
    ExperimentResult result;
    result.config = cfg;
    const std::size_t trials = static_cast<std::size_t>(cfg.trials);
    result.records.resize(series.size() * trials);

    parallel_for(result.records.size(), resolve_workers(cfg.workers), [&](std::size_t i) {
        const SeriesSpec& s = series[i / trials];
        const int trial = static_cast<int>(i % trials);
        ExperimentRecord& rec = result.records[i];
        rec.param_tuple = s.tuple;
        rec.trial = trial;
        rec.substream = derive_substream(cfg.seed, cfg.experiment + "|" + s.tuple,
                                         {static_cast<std::uint64_t>(trial)});
        auto start = std::chrono::steady_clock::now();
        s.run(rec.substream, rec);
        rec.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
    });

    // aggregate sequentially, in record order, so the output is identical
    // for every worker count
    for (std::size_t si = 0; si < series.size(); ++si) {
        std::vector<std::string> stat_order;
        std::vector<RunningStat> stats;
        for (std::size_t t = 0; t < trials; ++t) {
            const ExperimentRecord& rec = result.records[si * trials + t];
            for (const auto& [name, value] : rec.stats) {
                std::size_t pos = 0;
                while (pos < stat_order.size() && stat_order[pos] != name) ++pos;
                if (pos == stat_order.size()) {
                    stat_order.push_back(name);
                    stats.emplace_back();
                }
                stats[pos].add(value);
            }
        }
        for (std::size_t j = 0; j < stat_order.size(); ++j) {
            SummaryRow row;
            row.param_tuple = series[si].tuple;
            row.statistic = stat_order[j];
            row.count = stats[j].count;
            row.mean = stats[j].mean;
            row.se = stats[j].stderr_mean();
            row.min = stats[j].min;
            row.max = stats[j].max;
            result.summary.push_back(row);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// bound verification

BoundReport verify_bounds(const ExperimentConfig& cfg) {
    if (cfg.experiment != "cdf-sandwich" && cfg.experiment != "ball-tails" &&
        cfg.experiment != "diameter")
        throw ConfigError("verify supports cdf-sandwich, ball-tails and diameter only");

    std::vector<SeriesSpec> series = build_series(cfg);
    BoundReport report;
    report.base = run_experiment(cfg);
    report.all_pass = true;
    const ExperimentResult& res = report.base;

    ParamReader p(cfg.params);
    auto add_row = [&](BoundCheckRow row) {
        report.all_pass = report.all_pass && row.pass;
        report.rows.push_back(std::move(row));
    };

    if (cfg.experiment == "cdf-sandwich") {
        double confidence = p.get_double("confidence", 0.99);
        int grid_points = p.get_int("grid", 32);
        double band = dkw_band(cfg.trials, confidence);
        for (const SeriesSpec& s : series) {
            std::vector<double> samples;
            samples.reserve(cfg.trials);
            for (const ExperimentRecord& rec : res.records)
                if (rec.param_tuple == s.tuple && !rec.stats.empty())
                    samples.push_back(rec.stats.front().second);
            EmpiricalCdf cdf(std::move(samples));
            for (double x : cdf.quantile_grid(grid_points)) {
                double ecdf = cdf.value_at(x);
                if (s.lemma2) {
                    double closed = cdf_sum_exp_ci(s.terms, s.c, x);
                    BoundCheckRow row{s.tuple, "lemma2_cdf", x, ecdf, closed, band,
                                      std::abs(ecdf - closed) <= band};
                    add_row(std::move(row));
                } else {
                    TauCdfBounds bounds = tau_cdf_bounds(s.n, s.k, x);
                    add_row({s.tuple, "cdf_lower", x, ecdf, bounds.lower, band,
                             ecdf >= bounds.lower - band});
                    add_row({s.tuple, "cdf_upper", x, ecdf, bounds.upper, band,
                             ecdf <= bounds.upper + band});
                }
            }
        }
    } else if (cfg.experiment == "ball-tails") {
        double slack = p.get_double("slack", 3.0);
        for (const SeriesSpec& s : series) {
            const SummaryRow* below = res.find_summary(s.tuple, "below_s");
            const SummaryRow* above = res.find_summary(s.tuple, "above_c");
            BallTailLower cor1 = ball_tail_lower(s.n, s.delta);
            double se1 = std::sqrt(cor1.prob_bound * (1.0 - cor1.prob_bound) / cfg.trials);
            add_row({s.tuple, "ball_small", cor1.threshold, below->mean, cor1.prob_bound,
                     slack * se1, below->mean <= cor1.prob_bound + slack * se1});
            double bound2 = ball_tail_upper(s.n, s.delta, s.c);
            double se2 = std::sqrt(bound2 * (1.0 - bound2) / cfg.trials);
            double thr = std::exp(std::min(s.c * s.delta * s.n, 700.0));
            add_row({s.tuple, "ball_large", thr, above->mean, bound2, slack * se2,
                     above->mean <= bound2 + slack * se2});
        }
    } else { // diameter
        double slack = p.get_double("slack", 10.0);
        for (const SeriesSpec& s : series) {
            const SummaryRow* exceed = res.find_summary(s.tuple, "exceed");
            double envelope = janson_diameter_bound(s.n, s.c);
            double threshold = s.c * std::log(static_cast<double>(s.n)) / s.n;
            add_row({s.tuple, "diam_tail", threshold, exceed->mean, slack * envelope, 0.0,
                     exceed->mean <= slack * envelope});
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// serialization

void write_records_csv(const ExperimentResult& result, std::ostream& out) {
    out << "experiment,param_tuple,trial,statistic,value\n";
    for (const ExperimentRecord& rec : result.records)
        for (const auto& [name, value] : rec.stats)
            out << result.config.experiment << ',' << rec.param_tuple << ',' << rec.trial << ','
                << name << ',' << csv_double(value) << '\n';
    for (const SummaryRow& row : result.summary) {
        out << result.config.experiment << ',' << row.param_tuple << ",-1," << row.statistic
            << ":count," << row.count << '\n';
        out << result.config.experiment << ',' << row.param_tuple << ",-1," << row.statistic
            << ":mean," << csv_double(row.mean) << '\n';
        out << result.config.experiment << ',' << row.param_tuple << ",-1," << row.statistic
            << ":se," << csv_double(row.se) << '\n';
        out << result.config.experiment << ',' << row.param_tuple << ",-1," << row.statistic
            << ":min," << csv_double(row.min) << '\n';
        out << result.config.experiment << ',' << row.param_tuple << ",-1," << row.statistic
            << ":max," << csv_double(row.max) << '\n';
    }
}

namespace {

ordered_json config_json(const ExperimentConfig& cfg) {
    ordered_json j;
    j["experiment"] = cfg.experiment;
    j["n"] = cfg.n_values;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["params"] = ordered_json::object();
    for (const auto& [k, v] : cfg.params) j["params"][k] = v;
    j["format"] = cfg.format == OutputFormat::Csv ? "csv" : "json";
    j["workers"] = cfg.workers;
    return j;
}

ordered_json record_json(const ExperimentRecord& rec) {
    ordered_json j;
    j["param_tuple"] = rec.param_tuple;
    j["trial"] = rec.trial;
    j["substream"] = rec.substream;
    j["stats"] = ordered_json::object();
    for (const auto& [name, value] : rec.stats) j["stats"][name] = value;
    j["wall_ms"] = rec.wall_ms;
    j["skipped"] = rec.skipped;
    if (rec.skipped) j["skip_reason"] = rec.skip_reason;
    return j;
}

} // namespace

std::string result_json(const ExperimentResult& result) {
    ordered_json j;
    j["config"] = config_json(result.config);
    j["records"] = ordered_json::array();
    for (const ExperimentRecord& rec : result.records) j["records"].push_back(record_json(rec));
    j["summary"] = ordered_json::array();
    for (const SummaryRow& row : result.summary) {
        ordered_json s;
        s["param_tuple"] = row.param_tuple;
        s["statistic"] = row.statistic;
        s["count"] = row.count;
        s["mean"] = row.mean;
        s["se"] = row.se;
        s["min"] = row.min;
        s["max"] = row.max;
        j["summary"].push_back(s);
    }
    return j.dump(2) + "\n";
}

void write_bound_report_csv(const BoundReport& report, std::ostream& out) {
    out << "experiment,param_tuple,check,x,empirical,bound,band,pass\n";
    for (const BoundCheckRow& row : report.rows)
        out << report.base.config.experiment << ',' << row.param_tuple << ',' << row.check << ','
            << csv_double(row.x) << ',' << csv_double(row.empirical) << ','
            << csv_double(row.bound) << ',' << csv_double(row.band) << ',' << (row.pass ? 1 : 0)
            << '\n';
    out << "# all_pass," << (report.all_pass ? 1 : 0) << '\n';
}

std::string bound_report_json(const BoundReport& report) {
    ordered_json j;
    j["config"] = config_json(report.base.config);
    j["checks"] = ordered_json::array();
    for (const BoundCheckRow& row : report.rows) {
        ordered_json r;
        r["param_tuple"] = row.param_tuple;
        r["check"] = row.check;
        r["x"] = row.x;
        r["empirical"] = row.empirical;
        r["bound"] = row.bound;
        r["band"] = row.band;
        r["pass"] = row.pass;
        j["checks"].push_back(r);
    }
    j["all_pass"] = report.all_pass;
    return j.dump(2) + "\n";
}

const char* output_schema_json() {
    return R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "experiment output",
  "type": "object",
  "required": ["config", "records", "summary"],
  "properties": {
    "config": {
      "type": "object",
      "required": ["experiment", "n", "trials", "seed", "params", "format", "workers"],
      "properties": {
        "experiment": {"type": "string"},
        "n": {"type": "array", "items": {"type": "integer"}},
        "trials": {"type": "integer"},
        "seed": {"type": "integer"},
        "params": {"type": "object"},
        "format": {"type": "string"},
        "workers": {"type": "integer"}
      }
    },
    "records": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["param_tuple", "trial", "substream", "stats"],
        "properties": {
          "param_tuple": {"type": "string"},
          "trial": {"type": "integer"},
          "substream": {"type": "integer"},
          "stats": {"type": "object"},
          "wall_ms": {"type": "number"},
          "skipped": {"type": "boolean"},
          "skip_reason": {"type": "string"}
        }
      }
    },
    "summary": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["param_tuple", "statistic", "count", "mean", "se", "min", "max"],
        "properties": {
          "param_tuple": {"type": "string"},
          "statistic": {"type": "string"},
          "count": {"type": "integer"},
          "mean": {"type": "number"},
          "se": {"type": "number"},
          "min": {"type": "number"},
          "max": {"type": "number"}
        }
      }
    }
  }
}
)";
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");

    ExperimentConfig cfg;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "experiment") {
                cfg.experiment = value.get<std::string>();
            } else if (key == "n") {
                cfg.n_values.clear();
                if (value.is_array())
                    for (const auto& v : value) cfg.n_values.push_back(v.get<int>());
                else
                    cfg.n_values.push_back(value.get<int>());
            } else if (key == "trials") {
                cfg.trials = value.get<int>();
            } else if (key == "seed") {
                cfg.seed = value.get<std::uint64_t>();
            } else if (key == "params") {
                if (!value.is_object()) throw ConfigError("config params must be an object");
                for (const auto& [pk, pv] : value.items()) {
                    if (pv.is_string())
                        cfg.params[pk] = pv.get<std::string>();
                    else
                        cfg.params[pk] = pv.dump();
                }
            } else if (key == "out") {
                cfg.out_path = value.get<std::string>();
            } else if (key == "format") {
                std::string f = value.get<std::string>();
                if (f == "csv")
                    cfg.format = OutputFormat::Csv;
                else if (f == "json")
                    cfg.format = OutputFormat::Json;
                else
                    throw ConfigError("config format must be csv or json");
            } else if (key == "workers") {
                cfg.workers = value.get<int>();
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return cfg;
}

} // namespace rsp
