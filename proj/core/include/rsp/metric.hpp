#ifndef RSP_METRIC_HPP
#define RSP_METRIC_HPP

#include <cstddef>
#include <vector>

#include "rsp/weighted_graph.hpp"

namespace rsp {

/// Shortest-path closure of a WeightedGraph: a dense n*n distance matrix.
/// Immutable after construction; safe to share read-only across workers.
struct RandomMetric {
    int n = 0;
    std::vector<double> dist; // row-major n*n
    WeightedGraph source_graph;

    double d(int u, int v) const { return dist[static_cast<std::size_t>(u) * n + v]; }

    const double* row(int u) const { return dist.data() + static_cast<std::size_t>(u) * n; }

    /// Wrap an explicit matrix (fixtures). No invariant is enforced here;
    /// generated instances are validated by tests instead.
    static RandomMetric from_matrix(int n, std::vector<double> matrix);
};

/// One Dijkstra pass over the complete graph. `dense` is the n*n weight
/// matrix (see WeightedGraph::dense_weights).
std::vector<double> dijkstra_row(const std::vector<double>& dense, int n, int source);

/// Distances from a single source; row `source` of the full metric.
std::vector<double> single_source_distances(const WeightedGraph& g, int source);

/// Shortest-path distances between all pairs: one priority-queue pass per
/// vertex, O(n^2 log n) total.
RandomMetric all_pairs_shortest_paths(const WeightedGraph& g);

/// generate_weights + all_pairs_shortest_paths in one call.
RandomMetric random_metric(int n, WeightDistribution dist, std::uint64_t seed);

/// Distances from one vertex, sorted ascending. sorted_dists[k-1] is
/// tau_k(center): the smallest radius whose ball holds at least k vertices.
struct BallProfile {
    int center = 0;
    std::vector<double> sorted_dists;

    double tau(int k) const; // 1-based, throws for k outside [1, n]
    int ball_size(double delta) const;
};

BallProfile ball_profile(const RandomMetric& m, int v);

/// Largest entry of the distance matrix.
double diameter(const RandomMetric& m);

} // namespace rsp

#endif
