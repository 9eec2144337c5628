#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rsp/analytics.hpp"
#include "rsp/metric.hpp"
#include "rsp/oracles.hpp"
#include "rsp/rng.hpp"
#include "rsp/weighted_graph.hpp"

using namespace rsp;

namespace {

// w(0,1)=1, w(0,2)=3, w(1,2)=1: the two-hop path 0-1-2 beats the direct edge
WeightedGraph triangle_fixture() {
    return weighted_graph_from_weights(3, {1.0, 3.0, 1.0});
}

} // namespace

TEST_SUITE("metric_core") {

    TEST_CASE("first weight is the inverse transform of the first uniform") {
        for (std::uint64_t seed : {1ull, 99ull, 123456789ull}) {
            WeightedGraph g = generate_weights(2, WeightDistribution::Exponential1, seed);
            Rng r(seed);
            double u = r.uniform();
            CHECK(g.weight(0, 1) == -std::log1p(-u));
        }
    }

    TEST_CASE("same parameters, bit-identical weights") {
        WeightedGraph a = generate_weights(5, WeightDistribution::Exponential1, 42);
        WeightedGraph b = generate_weights(5, WeightDistribution::Exponential1, 42);
        REQUIRE(a.weights.size() == 10);
        CHECK(a.weights == b.weights);
    }

    TEST_CASE("n below 2 is rejected") {
        CHECK_THROWS_AS(generate_weights(1, WeightDistribution::Exponential1, 0),
                        std::invalid_argument);
    }

    TEST_CASE("exp(1) sample mean at n=1000") {
        WeightedGraph g = generate_weights(1000, WeightDistribution::Exponential1, 7);
        double sum = 0.0;
        for (double w : g.weights) sum += w;
        double mean = sum / static_cast<double>(g.weights.size());
        CHECK(std::abs(mean - 1.0) <= 0.01); // 5 standard errors at 499500 samples
    }

    TEST_CASE("uniform weights lie in [0,1)") {
        WeightedGraph g = generate_weights(100, WeightDistribution::Uniform01, 3);
        double sum = 0.0;
        for (double w : g.weights) {
            REQUIRE(w >= 0.0);
            REQUIRE(w < 1.0);
            sum += w;
        }
        CHECK(std::abs(sum / g.weights.size() - 0.5) < 0.02);
    }

    TEST_CASE("pair_index enumerates the upper triangle in order") {
        const int n = 10;
        std::size_t expect = 0;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) CHECK(WeightedGraph::pair_index(n, u, v) == expect++);
        CHECK(WeightedGraph::pair_index(n, 7, 2) == WeightedGraph::pair_index(n, 2, 7));
    }

    TEST_CASE("instance dump round-trips bit-exactly") {
        WeightedGraph g = generate_weights(8, WeightDistribution::Uniform01, 11);
        std::stringstream buf;
        dump_instance(g, buf);
        WeightedGraph back = parse_instance(buf);
        CHECK(back.n == g.n);
        CHECK(back.seed == g.seed);
        CHECK(back.distribution == g.distribution);
        CHECK(back.weights == g.weights);
    }

    TEST_CASE("dump format: header plus one u<v line per edge") {
        WeightedGraph g = generate_weights(4, WeightDistribution::Exponential1, 5);
        std::stringstream buf;
        dump_instance(g, buf);
        std::string header;
        std::getline(buf, header);
        CHECK(header == "4 5 Exponential1");
        int lines = 0;
        std::string line;
        while (std::getline(buf, line))
            if (!line.empty()) ++lines;
        CHECK(lines == 6);
    }

    TEST_CASE("two-hop path beats the direct edge") {
        RandomMetric m = all_pairs_shortest_paths(triangle_fixture());
        CHECK(m.d(0, 2) == doctest::Approx(2.0));
        CHECK(m.d(0, 1) == doctest::Approx(1.0));
        CHECK(m.d(2, 0) == m.d(0, 2));
        CHECK(m.d(1, 1) == 0.0);
    }

    TEST_CASE("n=2 distance equals the single weight") {
        WeightedGraph g = weighted_graph_from_weights(2, {0.7});
        RandomMetric m = all_pairs_shortest_paths(g);
        CHECK(m.d(0, 1) == 0.7);
    }

    TEST_CASE("dijkstra matches the cubic relaxation oracle") {
        for (std::uint64_t seed : {0ull, 1ull, 2ull, 3ull, 4ull}) {
            WeightedGraph g = generate_weights(64, WeightDistribution::Exponential1, seed);
            RandomMetric fast = all_pairs_shortest_paths(g);
            RandomMetric slow = full_relaxation_apsp(g);
            double worst = 0.0;
            for (std::size_t i = 0; i < fast.dist.size(); ++i)
                worst = std::max(worst, std::abs(fast.dist[i] - slow.dist[i]));
            CHECK(worst <= 1e-9);
        }
    }

    TEST_CASE("pruned passes agree with the oracle at n=128") {
        for (std::uint64_t seed : {10ull, 11ull}) {
            WeightedGraph g = generate_weights(128, WeightDistribution::Exponential1, seed);
            RandomMetric fast = all_pairs_shortest_paths(g);
            RandomMetric slow = full_relaxation_apsp(g);
            double worst = 0.0;
            for (std::size_t i = 0; i < fast.dist.size(); ++i)
                worst = std::max(worst, std::abs(fast.dist[i] - slow.dist[i]));
            CHECK(worst <= 1e-9);
        }
    }

    TEST_CASE("metric invariants hold on generated instances") {
        for (auto [n, seed] : {std::pair<int, std::uint64_t>{16, 1}, {40, 2}, {64, 3}}) {
            WeightedGraph g = generate_weights(n, WeightDistribution::Exponential1, seed);
            RandomMetric m = all_pairs_shortest_paths(g);
            for (int u = 0; u < n; ++u) {
                REQUIRE(m.d(u, u) == 0.0);
                for (int v = u + 1; v < n; ++v) {
                    REQUIRE(m.d(u, v) == m.d(v, u));
                    REQUIRE(m.d(u, v) >= 0.0);
                    REQUIRE(m.d(u, v) <= g.weight(u, v));
                }
            }
            for (int u = 0; u < n; ++u)
                for (int x = 0; x < n; ++x)
                    for (int v = 0; v < n; ++v)
                        REQUIRE(m.d(u, v) <= m.d(u, x) + m.d(x, v) + 1e-12);
        }
    }

    TEST_CASE("triangle inequality, exhaustive at n=200") {
        RandomMetric m = random_metric(200, WeightDistribution::Exponential1, 77);
        double worst = 0.0;
        for (int u = 0; u < 200; ++u)
            for (int x = 0; x < 200; ++x)
                for (int v = 0; v < 200; ++v)
                    worst = std::max(worst, m.d(u, v) - m.d(u, x) - m.d(x, v));
        CHECK(worst <= 1e-12);
    }

    TEST_CASE("pipeline is deterministic") {
        RandomMetric a = random_metric(50, WeightDistribution::Exponential1, 99);
        RandomMetric b = random_metric(50, WeightDistribution::Exponential1, 99);
        CHECK(a.dist == b.dist);
    }

    TEST_CASE("ball profile") {
        RandomMetric m = random_metric(20, WeightDistribution::Exponential1, 4);
        BallProfile bp = ball_profile(m, 5);
        CHECK(bp.center == 5);
        CHECK(bp.tau(1) == 0.0);
        double row_max = 0.0;
        for (int u = 0; u < 20; ++u) row_max = std::max(row_max, m.d(5, u));
        CHECK(bp.tau(20) == row_max);
        for (std::size_t i = 1; i < bp.sorted_dists.size(); ++i)
            REQUIRE(bp.sorted_dists[i - 1] <= bp.sorted_dists[i]);
        CHECK(bp.ball_size(0.0) == 1); // only the center at radius zero
        for (int k = 1; k <= 20; ++k) CHECK(bp.ball_size(bp.tau(k)) >= k);
        CHECK_THROWS_AS(bp.tau(0), std::invalid_argument);
        CHECK_THROWS_AS(bp.tau(21), std::invalid_argument);
        CHECK_THROWS_AS(ball_profile(m, 20), std::invalid_argument);
        CHECK_THROWS_AS(ball_profile(m, -1), std::invalid_argument);
    }

    TEST_CASE("diameter fixtures") {
        RandomMetric tri = all_pairs_shortest_paths(triangle_fixture());
        CHECK(diameter(tri) == doctest::Approx(2.0));
        RandomMetric two = all_pairs_shortest_paths(weighted_graph_from_weights(2, {1.3}));
        CHECK(diameter(two) == 1.3);
    }

    TEST_CASE("mean pair distance and mean tau_n track the harmonic formulas") {
        const int n = 50;
        const int trials = 2000;
        RunningStat pair_stat, tau_stat;
        for (int t = 0; t < trials; ++t) {
            std::uint64_t sub = derive_substream(909, "metric-stats", {static_cast<std::uint64_t>(t)});
            WeightedGraph g = generate_weights(n, WeightDistribution::Exponential1, sub);
            std::vector<double> row = single_source_distances(g, 0);
            pair_stat.add(row[1]); // vertices are exchangeable, (0,1) is as good as random
            tau_stat.add(*std::max_element(row.begin(), row.end()));
        }
        double expect_pair = harmonic(n - 1) / (n - 1);
        double expect_tau = 2.0 * harmonic(n - 1) / n;
        CHECK(std::abs(pair_stat.mean - expect_pair) <= 4.0 * pair_stat.stderr_mean());
        CHECK(std::abs(tau_stat.mean - expect_tau) <= 4.0 * tau_stat.stderr_mean());
    }
}
