#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rsp/heuristics.hpp"
#include "rsp/metric.hpp"
#include "rsp/oracles.hpp"
#include "rsp/rng.hpp"

using namespace rsp;

namespace {

RandomMetric matrix4(double d01, double d02, double d03, double d12, double d13, double d23) {
    std::vector<double> m(16, 0.0);
    auto set = [&](int u, int v, double d) { m[u * 4 + v] = m[v * 4 + u] = d; };
    set(0, 1, d01);
    set(0, 2, d02);
    set(0, 3, d03);
    set(1, 2, d12);
    set(1, 3, d13);
    set(2, 3, d23);
    return RandomMetric::from_matrix(4, std::move(m));
}

RandomMetric all_ones(int n) {
    std::vector<double> m(static_cast<std::size_t>(n) * n, 1.0);
    for (int v = 0; v < n; ++v) m[static_cast<std::size_t>(v) * n + v] = 0.0;
    return RandomMetric::from_matrix(n, std::move(m));
}

TourResult make_tour(const RandomMetric& m, std::vector<int> order) {
    TourResult t;
    t.order = std::move(order);
    t.total_length = tour_length(m, t.order);
    return t;
}

} // namespace

TEST_SUITE("heuristics") {

    TEST_CASE("greedy matching on two vertices") {
        RandomMetric m = all_pairs_shortest_paths(weighted_graph_from_weights(2, {0.4}));
        MatchingResult r = greedy_matching(m);
        REQUIRE(r.edges.size() == 1);
        CHECK(r.edges[0] == std::pair<int, int>{0, 1});
        CHECK(r.total_length == 0.4);
    }

    TEST_CASE("greedy picks the short edge first and pays for it") {
        // d(0,1)=1 d(2,3)=10 d(0,2)=2 d(1,3)=2 d(0,3)=2.5 d(1,2)=2.5
        RandomMetric m = matrix4(1.0, 2.0, 2.5, 2.5, 2.0, 10.0);
        MatchingResult greedy = greedy_matching(m);
        REQUIRE(greedy.edges.size() == 2);
        CHECK(greedy.edges[0] == std::pair<int, int>{0, 1});
        CHECK(greedy.edges[1] == std::pair<int, int>{2, 3});
        CHECK(greedy.total_length == doctest::Approx(11.0));
        // all three perfect matchings: 11, 4, 5 -> optimum 4 via {0,2},{1,3}
        OracleResult exact = exact_min_matching(m);
        CHECK(exact.value == doctest::Approx(4.0));
        CHECK(greedy.total_length >= exact.value);
    }

    TEST_CASE("greedy matching rejects odd n") {
        RandomMetric m = random_metric(5, WeightDistribution::Exponential1, 1);
        CHECK_THROWS_AS(greedy_matching(m), std::invalid_argument);
    }

    TEST_CASE("greedy pick order is nondecreasing and never beats the oracle") {
        for (std::uint64_t seed : {2ull, 3ull, 4ull}) {
            RandomMetric m = random_metric(16, WeightDistribution::Exponential1, seed);
            MatchingResult r = greedy_matching(m);
            REQUIRE(r.pick_order.size() == 8);
            double prev = 0.0, total = 0.0;
            for (auto [u, v] : r.pick_order) {
                REQUIRE(m.d(u, v) >= prev);
                prev = m.d(u, v);
                total += m.d(u, v);
            }
            CHECK(total == doctest::Approx(r.total_length).epsilon(1e-12));
            std::vector<char> covered(16, 0);
            for (auto [u, v] : r.edges) {
                REQUIRE_FALSE(covered[u]);
                REQUIRE_FALSE(covered[v]);
                covered[u] = covered[v] = 1;
            }
            CHECK(r.total_length >= exact_min_matching(m).value - 1e-9);
        }
    }

    TEST_CASE("nearest neighbor on a triangle rides the unique cycle") {
        RandomMetric m = all_pairs_shortest_paths(weighted_graph_from_weights(3, {1.0, 3.0, 1.0}));
        double perimeter = m.d(0, 1) + m.d(1, 2) + m.d(0, 2);
        for (int start = 0; start < 3; ++start) {
            TourResult t = nearest_neighbor_tour(m, start);
            CHECK(t.total_length == doctest::Approx(perimeter));
            CHECK(t.order.size() == 3);
        }
    }

    TEST_CASE("nearest neighbor on two vertices goes there and back") {
        RandomMetric m = all_pairs_shortest_paths(weighted_graph_from_weights(2, {0.9}));
        TourResult t = nearest_neighbor_tour(m, 0);
        CHECK(t.total_length == doctest::Approx(1.8));
    }

    TEST_CASE("nearest neighbor breaks ties toward the lowest index") {
        RandomMetric m = all_ones(5);
        TourResult t = nearest_neighbor_tour(m, 2);
        CHECK(t.order == std::vector<int>{2, 0, 1, 3, 4});
    }

    TEST_CASE("nearest neighbor never beats the exact tour") {
        for (std::uint64_t seed : {5ull, 6ull}) {
            RandomMetric m = random_metric(12, WeightDistribution::Exponential1, seed);
            TourResult t = nearest_neighbor_tour(m, 0);
            CHECK(t.total_length >= held_karp_tsp(m).value - 1e-9);
        }
        RandomMetric m = random_metric(12, WeightDistribution::Exponential1, 7);
        CHECK_THROWS_AS(nearest_neighbor_tour(m, 12), std::invalid_argument);
    }

    TEST_CASE("insertion on a triangle is the triangle") {
        RandomMetric m = all_pairs_shortest_paths(weighted_graph_from_weights(3, {1.0, 3.0, 1.0}));
        double perimeter = m.d(0, 1) + m.d(1, 2) + m.d(0, 2);
        Rng stream(8);
        for (InsertionRule rule : {InsertionRule::Nearest, InsertionRule::Farthest,
                                   InsertionRule::Cheapest, InsertionRule::Random,
                                   InsertionRule::FixedOrder}) {
            TourResult t = insertion_tour(m, rule, &stream);
            CHECK(t.total_length == doctest::Approx(perimeter));
        }
    }

    TEST_CASE("fixed-order insertion in an all-ones metric") {
        RandomMetric m = all_ones(4);
        TourResult t = insertion_tour(m, InsertionRule::FixedOrder);
        CHECK(t.total_length == doctest::Approx(4.0));
        // every position costs the same; the earliest slot wins
        CHECK(t.order == std::vector<int>{0, 3, 1, 2});
    }

    TEST_CASE("insertion handles degenerate sizes") {
        RandomMetric m2 = all_pairs_shortest_paths(weighted_graph_from_weights(2, {0.3}));
        TourResult t2 = insertion_tour(m2, InsertionRule::Nearest);
        CHECK(t2.order.size() == 2);
        CHECK(t2.total_length == doctest::Approx(0.6));
    }

    TEST_CASE("random insertion requires its stream") {
        RandomMetric m = random_metric(8, WeightDistribution::Exponential1, 9);
        CHECK_THROWS_AS(insertion_tour(m, InsertionRule::Random, nullptr), std::invalid_argument);
        Rng s1(10), s2(10);
        TourResult a = insertion_tour(m, InsertionRule::Random, &s1);
        TourResult b = insertion_tour(m, InsertionRule::Random, &s2);
        CHECK(a.order == b.order);
    }

    TEST_CASE("every insertion rule yields a valid tour no shorter than optimal") {
        for (std::uint64_t seed : {11ull, 12ull}) {
            RandomMetric m = random_metric(12, WeightDistribution::Exponential1, seed);
            double opt = held_karp_tsp(m).value;
            Rng stream(seed);
            for (InsertionRule rule : {InsertionRule::Nearest, InsertionRule::Farthest,
                                       InsertionRule::Cheapest, InsertionRule::Random,
                                       InsertionRule::FixedOrder}) {
                TourResult t = insertion_tour(m, rule, &stream);
                std::vector<int> sorted = t.order;
                std::sort(sorted.begin(), sorted.end());
                for (int i = 0; i < 12; ++i) REQUIRE(sorted[i] == i);
                REQUIRE(t.total_length == doctest::Approx(tour_length(m, t.order)).epsilon(1e-12));
                REQUIRE(t.total_length >= opt - 1e-9);
            }
        }
    }

    TEST_CASE("cheapest insertion's incremental bookkeeping matches a rescan") {
        // the incremental position cache must not drift from a full scan;
        // compare final tours on a batch of instances
        for (std::uint64_t seed : {21ull, 22ull, 23ull, 24ull}) {
            RandomMetric m = random_metric(30, WeightDistribution::Exponential1, seed);
            TourResult fast = insertion_tour(m, InsertionRule::Cheapest);
            // reference: plain quadratic re-evaluation
            std::vector<int> order = {0, 1, 2};
            std::vector<int> remaining;
            for (int v = 3; v < 30; ++v) remaining.push_back(v);
            while (!remaining.empty()) {
                double best_cost = std::numeric_limits<double>::infinity();
                int best_v = -1, best_pos = -1;
                for (int v : remaining) {
                    for (std::size_t i = 0; i < order.size(); ++i) {
                        int a = order[i], b = order[(i + 1) % order.size()];
                        double cost = m.d(a, v) + m.d(v, b) - m.d(a, b);
                        if (cost < best_cost) {
                            best_cost = cost;
                            best_v = v;
                            best_pos = static_cast<int>(i);
                        }
                    }
                }
                order.insert(order.begin() + best_pos + 1, best_v);
                remaining.erase(std::find(remaining.begin(), remaining.end(), best_v));
            }
            CHECK(fast.order == order);
        }
    }

    TEST_CASE("two-opt on a triangle has nothing to do") {
        RandomMetric m = all_pairs_shortest_paths(weighted_graph_from_weights(3, {1.0, 3.0, 1.0}));
        TourResult init = make_tour(m, {0, 1, 2});
        TourResult t = two_opt(m, init, PivotRule::FirstImprovement, 1000);
        CHECK(t.meta.iterations == 0);
        CHECK(t.meta.locally_optimal);
        CHECK(t.total_length == init.total_length);
    }

    TEST_CASE("two-opt fixes the crossing quadrilateral in one exchange") {
        // d(0,1)=d(2,3)=10, the rest 1: swapping to {0,2},{1,3} gains 18
        RandomMetric m = matrix4(10.0, 1.0, 1.0, 1.0, 1.0, 10.0);
        TourResult init = make_tour(m, {0, 1, 2, 3});
        REQUIRE(init.total_length == doctest::Approx(22.0));
        for (PivotRule pivot : {PivotRule::FirstImprovement, PivotRule::BestImprovement}) {
            TourResult t = two_opt(m, init, pivot, 1000);
            CHECK(t.meta.iterations == 1);
            CHECK(t.meta.min_improvement == doctest::Approx(18.0));
            CHECK(t.total_length == doctest::Approx(4.0));
            CHECK(t.meta.locally_optimal);
            CHECK(best_two_opt_gain(m, t.order) <= 1e-12);
        }
    }

    TEST_CASE("each applied exchange shrinks the tour by exactly its gain") {
        RandomMetric m = random_metric(30, WeightDistribution::Exponential1, 31);
        Rng stream(32);
        TourResult t = random_tour(m, stream);
        int steps = 0;
        while (steps < 10000) {
            double before = t.total_length;
            TourResult next = two_opt(m, t, PivotRule::FirstImprovement, 1);
            if (next.meta.iterations == 0) break;
            REQUIRE(next.total_length <
                    before); // strict decrease
            REQUIRE(next.total_length ==
                    doctest::Approx(before - next.meta.min_improvement).epsilon(1e-9));
            t = next;
            ++steps;
        }
        CHECK(best_two_opt_gain(m, t.order) <= 1e-12);
    }

    TEST_CASE("two-opt at n=100 terminates, certifies, and clears the weight prefix bound") {
        WeightedGraph g = generate_weights(100, WeightDistribution::Exponential1, 41);
        RandomMetric m = all_pairs_shortest_paths(g);
        Rng stream(42);
        TourResult init = random_tour(m, stream);
        TourResult t = two_opt(m, init, PivotRule::FirstImprovement, 10000000);
        CHECK(t.meta.iterations < 10000000);
        CHECK(t.meta.locally_optimal);
        CHECK(best_two_opt_gain(m, t.order) <= 1e-12);
        CHECK(t.total_length >= sorted_weight_prefix(g, 50) - 1e-9);
        CHECK(t.total_length <= init.total_length);
    }

    TEST_CASE("iteration cap flags the result") {
        RandomMetric m = random_metric(40, WeightDistribution::Exponential1, 51);
        Rng stream(52);
        TourResult init = random_tour(m, stream);
        TourResult t = two_opt(m, init, PivotRule::FirstImprovement, 1);
        CHECK(t.meta.iterations == 1);
        CHECK_FALSE(t.meta.locally_optimal);
        CHECK_THROWS_AS(two_opt(m, init, PivotRule::FirstImprovement, -1),
                        std::invalid_argument);
    }

    TEST_CASE("run records serialize consistently") {
        RandomMetric m = random_metric(10, WeightDistribution::Exponential1, 61);
        TourResult t = nearest_neighbor_tour(m, 0);
        HeuristicRunRecord rec = make_run_record(t, 10, 61);
        CHECK(rec.algorithm == "nearest-neighbor");
        CHECK(rec.length == t.total_length);
        CHECK(HeuristicRunRecord::csv_header() ==
              "algorithm,rule,pivot,n,seed,length,T,delta_min,locally_optimal");
        std::string row = rec.csv_row();
        CHECK(std::count(row.begin(), row.end(), ',') == 8);
        std::string json = rec.json();
        CHECK(json.find("\"algorithm\":\"nearest-neighbor\"") != std::string::npos);
        CHECK(json.find("\"n\":10") != std::string::npos);
        MatchingResult mr = greedy_matching(m);
        HeuristicRunRecord rec2 = make_run_record(mr, 10, 61);
        CHECK(rec2.algorithm == "greedy-matching");
        CHECK(rec2.length == doctest::Approx(mr.total_length));
    }

    TEST_CASE("rule and pivot names round-trip") {
        for (InsertionRule r : {InsertionRule::Nearest, InsertionRule::Farthest,
                                InsertionRule::Cheapest, InsertionRule::Random,
                                InsertionRule::FixedOrder})
            CHECK(insertion_rule_from_string(to_string(r)) == r);
        for (PivotRule p : {PivotRule::FirstImprovement, PivotRule::BestImprovement})
            CHECK(pivot_rule_from_string(to_string(p)) == p);
        CHECK_THROWS_AS(insertion_rule_from_string("bogus"), std::invalid_argument);
        CHECK_THROWS_AS(pivot_rule_from_string("bogus"), std::invalid_argument);
    }
}
