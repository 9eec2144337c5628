#include "rsp/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rsp/analytics.hpp"
#include "rsp/rng.hpp"

namespace rsp {
namespace {

std::vector<int> ball_members(const RandomMetric& m, int center, double delta) {
    std::vector<int> members;
    const double* row = m.row(center);
    for (int u = 0; u < m.n; ++u)
        if (row[u] <= delta) members.push_back(u);
    return members;
}

std::vector<char> dense_flags(const RandomMetric& m, double delta, double threshold) {
    std::vector<char> dense(m.n, 0);
    for (int v = 0; v < m.n; ++v) {
        const double* row = m.row(v);
        int size = 0;
        for (int u = 0; u < m.n; ++u)
            if (row[u] <= delta) ++size;
        dense[v] = size >= threshold ? 1 : 0;
    }
    return dense;
}

} // namespace

CenterClassification classify_centers(const RandomMetric& m, double delta) {
    if (delta < 0.0) throw std::invalid_argument("classify_centers: delta must be >= 0");
    const double threshold = s_delta(m.n, delta);
    const std::vector<char> dense = dense_flags(m, delta, threshold);

    // covered[u]: u lies in some dense center's ball
    std::vector<char> covered(m.n, 0);
    for (int v = 0; v < m.n; ++v) {
        if (!dense[v]) continue;
        const double* row = m.row(v);
        for (int u = 0; u < m.n; ++u)
            if (row[u] <= delta) covered[u] = 1;
    }

    CenterClassification out;
    for (int v = 0; v < m.n; ++v) {
        if (dense[v])
            out.dense.push_back(v);
        else if (!covered[v])
            out.sparse.push_back(v);
    }
    return out;
}

ClusteringResult build_clusters(const RandomMetric& m, double delta) {
    if (delta < 0.0) throw std::invalid_argument("build_clusters: delta must be >= 0");
    const int n = m.n;
    ClusteringResult result;
    result.delta = delta;
    result.s_delta = s_delta(n, delta);

    const std::vector<char> dense = dense_flags(m, delta, result.s_delta);
    for (int v = 0; v < n; ++v)
        if (dense[v]) result.dense_centers.push_back(v);

    // Greedy MIS over dense centers in ascending index. Two centers are
    // adjacent iff their balls share a vertex, so a candidate is independent
    // exactly when its ball avoids every ball already chosen.
    std::vector<char> mis_covered(n, 0);
    std::vector<char> in_mis(n, 0);
    std::vector<int> assigned(n, -1);        // final cluster id per vertex
    std::vector<int> initial_cluster(n, -1); // membership in an initial ball
    for (int v : result.dense_centers) {
        std::vector<int> ball = ball_members(m, v, delta);
        bool independent = true;
        for (int u : ball) {
            if (mis_covered[u]) {
                independent = false;
                break;
            }
        }
        if (!independent) continue;
        int cluster_id = static_cast<int>(result.clusters.size());
        result.independent_set.push_back(v);
        in_mis[v] = 1;
        result.clusters.emplace_back();
        for (int u : ball) {
            mis_covered[u] = 1;
            initial_cluster[u] = cluster_id;
            assigned[u] = cluster_id;
            result.clusters[cluster_id].push_back(u);
        }
    }

    // Remaining dense balls merge into the lowest-indexed initial cluster
    // they intersect; vertices already placed stay put.
    for (int v : result.dense_centers) {
        if (in_mis[v]) continue;
        std::vector<int> ball = ball_members(m, v, delta);
        int target = -1;
        for (int u : ball)
            if (initial_cluster[u] >= 0 && (target < 0 || initial_cluster[u] < target))
                target = initial_cluster[u];
        // MIS maximality guarantees target >= 0 for every dense center
        for (int u : ball) {
            if (assigned[u] < 0) {
                assigned[u] = target;
                result.clusters[target].push_back(u);
            }
        }
    }

    // Whatever no dense ball reached becomes its own cluster.
    for (int v = 0; v < n; ++v) {
        if (assigned[v] < 0) {
            assigned[v] = static_cast<int>(result.clusters.size());
            result.clusters.push_back({v});
            result.sparse_centers.push_back(v);
        }
    }

    for (auto& cluster : result.clusters) std::sort(cluster.begin(), cluster.end());
    return result;
}

ClusteringCheck verify_clustering(const RandomMetric& m, const ClusteringResult& r) {
    const int n = m.n;
    ClusteringCheck check;

    std::vector<int> seen(n, 0);
    for (const auto& cluster : r.clusters)
        for (int v : cluster)
            if (v >= 0 && v < n) ++seen[v];
    check.partition_ok = std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });

    check.diameter_ok = true;
    for (const auto& cluster : r.clusters) {
        for (std::size_t i = 0; i < cluster.size(); ++i) {
            for (std::size_t j = i + 1; j < cluster.size(); ++j) {
                double d = m.d(cluster[i], cluster[j]);
                if (d > check.max_cluster_diameter) check.max_cluster_diameter = d;
            }
        }
    }
    if (check.max_cluster_diameter > 6.0 * r.delta) check.diameter_ok = false;

    std::vector<char> covered(n, 0);
    check.mis_balls_disjoint = true;
    for (int c : r.independent_set) {
        for (int u = 0; u < n; ++u) {
            if (m.d(c, u) <= r.delta) {
                if (covered[u]) check.mis_balls_disjoint = false;
                covered[u] = 1;
            }
        }
    }

    check.sparse_singletons_ok = true;
    for (int s : r.sparse_centers) {
        bool found = false;
        for (const auto& cluster : r.clusters)
            if (cluster.size() == 1 && cluster[0] == s) found = true;
        if (!found) check.sparse_singletons_ok = false;
    }

    check.t_bound_ok =
        static_cast<double>(r.independent_set.size()) <= static_cast<double>(n) / r.s_delta + 1e-9;
    return check;
}

double cluster_count_envelope(int n, double delta) {
    return 1.0 + n / std::exp(delta * n / 5.0);
}

std::vector<ClusterCurveRow> cluster_count_curve(int n, const std::vector<double>& deltas,
                                                 int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("cluster_count_curve: trials must be >= 1");
    std::vector<RunningStat> stats(deltas.size());
    for (int t = 0; t < trials; ++t) {
        std::uint64_t sub = derive_substream(seed, "cluster-curve", {static_cast<std::uint64_t>(n),
                                                                     static_cast<std::uint64_t>(t)});
        RandomMetric m = random_metric(n, WeightDistribution::Exponential1, sub);
        for (std::size_t i = 0; i < deltas.size(); ++i)
            stats[i].add(static_cast<double>(build_clusters(m, deltas[i]).cluster_count()));
    }
    std::vector<ClusterCurveRow> rows(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        rows[i].delta = deltas[i];
        rows[i].mean_count = stats[i].mean;
        rows[i].max_count = stats[i].max;
        rows[i].envelope = cluster_count_envelope(n, deltas[i]);
    }
    return rows;
}

std::string cluster_dump_json(const ClusteringResult& r) {
    std::ostringstream out;
    out.precision(17);
    out << "{\"delta\":" << r.delta << ",\"s_delta\":" << r.s_delta
        << ",\"t\":" << r.independent_set.size() << ",\"cluster_count\":" << r.clusters.size()
        << ",\"dense_count\":" << r.dense_centers.size()
        << ",\"sparse_count\":" << r.sparse_centers.size() << ",\"clusters\":[";
    for (std::size_t i = 0; i < r.clusters.size(); ++i) {
        if (i) out << ',';
        out << '[';
        for (std::size_t j = 0; j < r.clusters[i].size(); ++j) {
            if (j) out << ',';
            out << r.clusters[i][j];
        }
        out << ']';
    }
    out << "]}";
    return out.str();
}

} // namespace rsp
