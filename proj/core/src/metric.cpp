#include "rsp/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

namespace rsp {

RandomMetric RandomMetric::from_matrix(int n, std::vector<double> matrix) {
    if (n < 1 || matrix.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("RandomMetric::from_matrix: bad matrix size");
    RandomMetric m;
    m.n = n;
    m.dist = std::move(matrix);
    m.source_graph.n = n;
    return m;
}

std::vector<double> dijkstra_row(const std::vector<double>& dense, int n, int source) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        auto [dv, v] = heap.top();
        heap.pop();
        if (dv > dist[v]) continue; // stale entry
        const double* wrow = dense.data() + static_cast<std::size_t>(v) * n;
        for (int u = 0; u < n; ++u) {
            // settled u never passes: dist[u] <= dv <= dv + w
            double cand = dv + wrow[u];
            if (cand < dist[u]) {
                dist[u] = cand;
                heap.emplace(cand, u);
            }
        }
    }
    return dist;
}

std::vector<double> single_source_distances(const WeightedGraph& g, int source) {
    if (source < 0 || source >= g.n)
        throw std::invalid_argument("single_source_distances: source out of range");
    return dijkstra_row(g.dense_weights(), g.n, source);
}

namespace {

// Adjacency restricted to edges of weight <= theta, CSR layout.
struct PrunedAdjacency {
    std::vector<int> head; // n+1 offsets
    std::vector<int> nbr;
    std::vector<double> w;
};

PrunedAdjacency build_pruned(const WeightedGraph& g, double theta) {
    const int n = g.n;
    PrunedAdjacency adj;
    adj.head.assign(n + 1, 0);
    std::size_t idx = 0;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v, ++idx) {
            if (g.weights[idx] <= theta) {
                ++adj.head[u + 1];
                ++adj.head[v + 1];
            }
        }
    }
    for (int u = 0; u < n; ++u) adj.head[u + 1] += adj.head[u];
    adj.nbr.resize(adj.head[n]);
    adj.w.resize(adj.head[n]);
    std::vector<int> fill(adj.head.begin(), adj.head.end() - 1);
    idx = 0;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v, ++idx) {
            double weight = g.weights[idx];
            if (weight <= theta) {
                adj.nbr[fill[u]] = v;
                adj.w[fill[u]++] = weight;
                adj.nbr[fill[v]] = u;
                adj.w[fill[v]++] = weight;
            }
        }
    }
    return adj;
}

// Returns false when some distance exceeds theta; then the pruned graph may
// be missing a shortest path and the caller must retry with a larger theta.
bool dijkstra_pruned(const PrunedAdjacency& adj, int n, int source, double theta, double* out) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) out[i] = kInf;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    out[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        auto [dv, v] = heap.top();
        heap.pop();
        if (dv > out[v]) continue;
        for (int e = adj.head[v]; e < adj.head[v + 1]; ++e) {
            int u = adj.nbr[e];
            double cand = dv + adj.w[e];
            if (cand < out[u]) {
                out[u] = cand;
                heap.emplace(cand, u);
            }
        }
    }
    for (int i = 0; i < n; ++i)
        if (!(out[i] <= theta)) return false;
    return true;
}

} // namespace

RandomMetric all_pairs_shortest_paths(const WeightedGraph& g) {
    RandomMetric m;
    m.n = g.n;
    m.source_graph = g;
    m.dist.resize(static_cast<std::size_t>(g.n) * g.n);
    if (g.n < 64) {
        const std::vector<double> dense = g.dense_weights();
        for (int s = 0; s < g.n; ++s) {
            std::vector<double> row = dijkstra_row(dense, g.n, s);
            std::copy(row.begin(), row.end(), m.dist.begin() + static_cast<std::size_t>(s) * g.n);
        }
    } else {
        // Every edge on a shortest path weighs at most the path length, so
        // edges heavier than a certified bound on the diameter can be
        // dropped without changing any distance. Start near the typical
        // diameter and double until all distances certify below theta; the
        // result is then bit-identical to the unpruned passes.
        double theta = 6.0 * std::log(static_cast<double>(g.n)) / g.n;
        for (;;) {
            PrunedAdjacency adj = build_pruned(g, theta);
            bool certified = true;
            for (int s = 0; s < g.n; ++s) {
                if (!dijkstra_pruned(adj, g.n, s, theta,
                                     m.dist.data() + static_cast<std::size_t>(s) * g.n)) {
                    certified = false;
                    break;
                }
            }
            if (certified) break;
            theta *= 2.0;
        }
    }
    // Per-source passes can disagree by an ulp across the diagonal (path
    // sums accumulate in opposite orders). Mirror the upper triangle so the
    // matrix is exactly symmetric.
    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v)
            m.dist[static_cast<std::size_t>(v) * g.n + u] =
                m.dist[static_cast<std::size_t>(u) * g.n + v];
    return m;
}

RandomMetric random_metric(int n, WeightDistribution dist, std::uint64_t seed) {
    return all_pairs_shortest_paths(generate_weights(n, dist, seed));
}

double BallProfile::tau(int k) const {
    if (k < 1 || k > static_cast<int>(sorted_dists.size()))
        throw std::invalid_argument("BallProfile::tau: k out of range");
    return sorted_dists[k - 1];
}

int BallProfile::ball_size(double delta) const {
    // closed ball: count of distances <= delta
    return static_cast<int>(std::upper_bound(sorted_dists.begin(), sorted_dists.end(), delta) -
                            sorted_dists.begin());
}

BallProfile ball_profile(const RandomMetric& m, int v) {
    if (v < 0 || v >= m.n) throw std::invalid_argument("ball_profile: vertex out of range");
    BallProfile p;
    p.center = v;
    p.sorted_dists.assign(m.row(v), m.row(v) + m.n);
    std::sort(p.sorted_dists.begin(), p.sorted_dists.end());
    return p;
}

double diameter(const RandomMetric& m) {
    double best = 0.0;
    for (double x : m.dist)
        if (x > best) best = x;
    return best;
}

} // namespace rsp
