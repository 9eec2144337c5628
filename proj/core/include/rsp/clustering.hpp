#ifndef RSP_CLUSTERING_HPP
#define RSP_CLUSTERING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rsp/metric.hpp"

namespace rsp {

/// Partition of the vertex set into clusters of diameter at most 6*delta.
///
/// Construction: vertices with a ball of at least s_delta members are dense
/// centers. A greedy maximal independent set over dense centers (ascending
/// index, two centers adjacent iff their balls intersect) seeds one initial
/// cluster per chosen ball; the remaining dense balls are merged into the
/// lowest-indexed initial cluster they intersect, first assignment wins.
/// Vertices covered by no dense ball end up as singletons, one per sparse
/// center.
struct ClusteringResult {
    double delta = 0.0;
    double s_delta = 0.0;
    std::vector<std::vector<int>> clusters; // disjoint, cover all vertices
    std::vector<int> dense_centers;         // ascending
    std::vector<int> sparse_centers;        // ascending
    std::vector<int> independent_set;       // MIS pick order (ascending index)

    int cluster_count() const { return static_cast<int>(clusters.size()); }
};

struct CenterClassification {
    std::vector<int> dense;  // |B_delta(v)| >= s_delta
    std::vector<int> sparse; // small ball and inside no dense center's ball
};

CenterClassification classify_centers(const RandomMetric& m, double delta);

ClusteringResult build_clusters(const RandomMetric& m, double delta);

/// Hard checks on a clustering against its metric. All fields must come out
/// true on every instance.
struct ClusteringCheck {
    bool partition_ok = false;     // clusters disjoint and cover V
    bool diameter_ok = false;      // every cluster diameter <= 6*delta
    bool mis_balls_disjoint = false;
    bool sparse_singletons_ok = false;
    bool t_bound_ok = false;       // |independent_set| <= n / s_delta
    double max_cluster_diameter = 0.0;

    bool all_ok() const {
        return partition_ok && diameter_ok && mis_balls_disjoint && sparse_singletons_ok &&
               t_bound_ok;
    }
};

ClusteringCheck verify_clustering(const RandomMetric& m, const ClusteringResult& r);

/// Reference envelope 1 + n / exp(delta*n/5) for the expected cluster count.
double cluster_count_envelope(int n, double delta);

struct ClusterCurveRow {
    double delta = 0.0;
    double mean_count = 0.0;
    double max_count = 0.0;
    double envelope = 0.0;
};

/// Mean and max cluster count over `trials` fresh instances, at every delta,
/// each instance clustered at the full delta list.
std::vector<ClusterCurveRow> cluster_count_curve(int n, const std::vector<double>& deltas,
                                                 int trials, std::uint64_t seed);

/// JSON dump: cluster lists (sorted) plus delta / s_delta / t / count
/// metadata.
std::string cluster_dump_json(const ClusteringResult& r);

} // namespace rsp

#endif
