#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "rsp/analytics.hpp"
#include "rsp/clustering.hpp"
#include "rsp/metric.hpp"
#include "rsp/rng.hpp"

using namespace rsp;

TEST_SUITE("clustering") {

    TEST_CASE("radius past the diameter makes everything dense, one cluster") {
        RandomMetric m = random_metric(30, WeightDistribution::Exponential1, 1);
        double delta = diameter(m) + 0.01;
        CenterClassification cc = classify_centers(m, delta);
        CHECK(cc.dense.size() == 30);
        CHECK(cc.sparse.empty());
        ClusteringResult r = build_clusters(m, delta);
        CHECK(r.cluster_count() == 1);
        CHECK(r.independent_set.size() == 1);
        CHECK(r.clusters[0].size() == 30);
        CHECK(verify_clustering(m, r).all_ok());
    }

    TEST_CASE("radius zero: everyone is a dense singleton") {
        RandomMetric m = random_metric(25, WeightDistribution::Exponential1, 2);
        CenterClassification cc = classify_centers(m, 0.0);
        CHECK(cc.dense.size() == 25); // s_0 = 1 and |B_0(v)| = 1
        CHECK(cc.sparse.empty());
        ClusteringResult r = build_clusters(m, 0.0);
        CHECK(r.cluster_count() == 25);
        for (const auto& c : r.clusters) CHECK(c.size() == 1);
        ClusteringCheck check = verify_clustering(m, r);
        CHECK(check.all_ok());
        CHECK(check.max_cluster_diameter == 0.0);
    }

    TEST_CASE("classification covers every vertex") {
        for (std::uint64_t seed : {3ull, 4ull, 5ull}) {
            RandomMetric m = random_metric(100, WeightDistribution::Exponential1, seed);
            double delta = 0.05;
            CenterClassification cc = classify_centers(m, delta);
            std::set<int> dense(cc.dense.begin(), cc.dense.end());
            // covered = inside some dense ball
            std::vector<char> covered(m.n, 0);
            for (int v : cc.dense)
                for (int u = 0; u < m.n; ++u)
                    if (m.d(v, u) <= delta) covered[u] = 1;
            for (int s : cc.sparse) {
                REQUIRE_FALSE(dense.count(s));
                REQUIRE_FALSE(covered[s]);
            }
            for (int v = 0; v < m.n; ++v) {
                bool is_sparse = std::find(cc.sparse.begin(), cc.sparse.end(), v) != cc.sparse.end();
                REQUIRE((dense.count(v) || covered[v] || is_sparse));
            }
        }
    }

    TEST_CASE("hard invariants across a delta sweep") {
        for (int n : {20, 50}) {
            for (std::uint64_t seed : {6ull, 7ull, 8ull, 9ull, 10ull}) {
                RandomMetric m = random_metric(n, WeightDistribution::Exponential1, seed);
                for (int i = 0; i <= 20; ++i) {
                    double delta = static_cast<double>(i) / n;
                    ClusteringResult r = build_clusters(m, delta);
                    ClusteringCheck check = verify_clustering(m, r);
                    REQUIRE(check.partition_ok);
                    REQUIRE(check.diameter_ok);
                    REQUIRE(check.mis_balls_disjoint);
                    REQUIRE(check.sparse_singletons_ok);
                    REQUIRE(check.t_bound_ok);
                    REQUIRE(r.cluster_count() >= 1);
                    REQUIRE(r.cluster_count() <= n);
                    // disjoint MIS balls of size >= s_delta also cap t
                    if (r.s_delta > 1.0) {
                        double cap = std::floor(static_cast<double>(n) /
                                                std::ceil(r.s_delta));
                        REQUIRE(static_cast<double>(r.independent_set.size()) <= cap);
                    }
                }
            }
        }
    }

    TEST_CASE("clustering is deterministic") {
        RandomMetric m = random_metric(60, WeightDistribution::Exponential1, 11);
        ClusteringResult a = build_clusters(m, 0.08);
        ClusteringResult b = build_clusters(m, 0.08);
        CHECK(a.clusters == b.clusters);
        CHECK(a.independent_set == b.independent_set);
        CHECK(a.sparse_centers == b.sparse_centers);
    }

    TEST_CASE("independent set members come in ascending order and are dense") {
        RandomMetric m = random_metric(80, WeightDistribution::Exponential1, 12);
        ClusteringResult r = build_clusters(m, 0.06);
        CHECK(std::is_sorted(r.independent_set.begin(), r.independent_set.end()));
        std::set<int> dense(r.dense_centers.begin(), r.dense_centers.end());
        for (int c : r.independent_set) REQUIRE(dense.count(c));
    }

    TEST_CASE("count curve rows carry the envelope") {
        std::vector<double> deltas = {0.0, 0.1, 10.0};
        auto rows = cluster_count_curve(30, deltas, 5, 13);
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].mean_count == 30.0); // delta 0: n singletons
        CHECK(rows[0].envelope == doctest::Approx(31.0));
        CHECK(rows[2].mean_count == 1.0); // delta past the diameter
        for (const auto& row : rows) {
            CHECK(row.envelope == doctest::Approx(cluster_count_envelope(30, row.delta)));
            CHECK(row.max_count >= row.mean_count);
        }
        CHECK_THROWS_AS(cluster_count_curve(30, deltas, 0, 13), std::invalid_argument);
    }

    TEST_CASE("cluster dump is valid JSON with sorted clusters") {
        RandomMetric m = random_metric(40, WeightDistribution::Exponential1, 14);
        ClusteringResult r = build_clusters(m, 0.07);
        std::string dump = cluster_dump_json(r);
        CHECK(dump.find("\"delta\":") != std::string::npos);
        CHECK(dump.find("\"s_delta\":") != std::string::npos);
        CHECK(dump.find("\"t\":") != std::string::npos);
        CHECK(dump.find("\"clusters\":[") != std::string::npos);
        for (const auto& c : r.clusters) REQUIRE(std::is_sorted(c.begin(), c.end()));
    }

    TEST_CASE("negative delta is rejected") {
        RandomMetric m = random_metric(10, WeightDistribution::Exponential1, 15);
        CHECK_THROWS_AS(build_clusters(m, -0.1), std::invalid_argument);
        CHECK_THROWS_AS(classify_centers(m, -0.1), std::invalid_argument);
    }
}
