#ifndef RSP_HEURISTICS_HPP
#define RSP_HEURISTICS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rsp/metric.hpp"
#include "rsp/rng.hpp"

namespace rsp {

struct MatchingResult {
    std::vector<std::pair<int, int>> edges; // u < v, n/2 of them
    double total_length = 0.0;
    std::vector<std::pair<int, int>> pick_order; // greedy pick sequence
};

/// Repeatedly add the globally shortest edge between two unmatched
/// vertices, ties broken lexicographically by (u, v). Throws for odd n.
MatchingResult greedy_matching(const RandomMetric& m);

enum class InsertionRule { Nearest, Farthest, Cheapest, Random, FixedOrder };
enum class PivotRule { FirstImprovement, BestImprovement };

std::string to_string(InsertionRule r);
std::string to_string(PivotRule p);
InsertionRule insertion_rule_from_string(const std::string& s);
PivotRule pivot_rule_from_string(const std::string& s);

struct TourMeta {
    std::string algorithm;
    std::string rule;                   // insertion rule or pivot rule, "" otherwise
    long iterations = 0;                // 2-opt: exchanges applied
    double min_improvement = 0.0;       // 2-opt: smallest applied delta
    bool locally_optimal = false;       // 2-opt: certified no improving exchange
};

struct TourResult {
    std::vector<int> order; // cyclic; order[i] -> order[(i+1) % n]
    double total_length = 0.0;
    TourMeta meta;
};

double tour_length(const RandomMetric& m, const std::vector<int>& order);

/// Visit the nearest unvisited vertex from `start` until all are seen, then
/// close the cycle. Ties go to the lowest vertex index.
TourResult nearest_neighbor_tour(const RandomMetric& m, int start);

/// Grow a tour from the 3 lowest-indexed vertices (Random: 3 picks from the
/// stream), inserting the rule's vertex where the length increase
/// d(a,v) + d(v,b) - d(a,b) is minimal. Position ties: earliest position;
/// selection ties: lowest index. `stream` is consumed by Random only.
TourResult insertion_tour(const RandomMetric& m, InsertionRule rule, Rng* stream = nullptr);

/// Uniform random permutation tour.
TourResult random_tour(const RandomMetric& m, Rng& stream);

/// 2-opt local search from `initial`. Applies strictly improving
/// 2-exchanges until none remains or max_iters exchanges were applied.
/// FirstImprovement restarts its lexicographic (i, j) position scan from
/// the beginning after every applied exchange.
TourResult two_opt(const RandomMetric& m, const TourResult& initial, PivotRule pivot,
                   long max_iters);

/// Best remaining 2-exchange gain, from an exhaustive O(n^2) scan. At a
/// certified local optimum this is <= floor (1e-12 absorbs roundoff).
double best_two_opt_gain(const RandomMetric& m, const std::vector<int>& order);

/// One serialized heuristic run:
/// {algorithm, rule, pivot, n, seed, length, T, delta_min, locally_optimal}.
struct HeuristicRunRecord {
    std::string algorithm;
    std::string rule;
    std::string pivot;
    int n = 0;
    std::uint64_t seed = 0;
    double length = 0.0;
    long iterations = 0;
    double delta_min = 0.0;
    bool locally_optimal = false;

    static std::string csv_header();
    std::string csv_row() const;
    std::string json() const;
};

HeuristicRunRecord make_run_record(const TourResult& t, int n, std::uint64_t seed);
HeuristicRunRecord make_run_record(const MatchingResult& m, int n, std::uint64_t seed);

} // namespace rsp

#endif
