#ifndef RSP_WEIGHTED_GRAPH_HPP
#define RSP_WEIGHTED_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rsp {

enum class WeightDistribution { Exponential1, Uniform01 };

std::string to_string(WeightDistribution d);
WeightDistribution weight_distribution_from_string(const std::string& s);

/// Complete undirected graph on n vertices with one weight per unordered
/// pair, stored as a flat upper-triangle array in (u,v) lexicographic order.
struct WeightedGraph {
    int n = 0;
    WeightDistribution distribution = WeightDistribution::Exponential1;
    std::uint64_t seed = 0;
    std::vector<double> weights; // size n(n-1)/2

    std::size_t edge_count() const { return weights.size(); }

    static std::size_t pair_index(int n, int u, int v) {
        if (u > v) { int t = u; u = v; v = t; }
        return static_cast<std::size_t>(u) * n - static_cast<std::size_t>(u) * (u + 1) / 2 +
               static_cast<std::size_t>(v - u - 1);
    }

    double weight(int u, int v) const { return weights[pair_index(n, u, v)]; }

    /// Full n*n copy of the weights (diagonal 0). Dijkstra scans rows of
    /// this instead of jumping around the triangle.
    std::vector<double> dense_weights() const;
};

/// Draw all n(n-1)/2 edge weights i.i.d. from the named distribution, in
/// (u,v) lexicographic order, from the stream seeded with `seed`.
/// Deterministic function of (n, dist, seed). Throws std::invalid_argument
/// for n < 2.
WeightedGraph generate_weights(int n, WeightDistribution dist, std::uint64_t seed);

/// Assemble a graph from explicit weights (test fixtures mostly).
WeightedGraph weighted_graph_from_weights(int n, std::vector<double> weights,
                                          WeightDistribution dist = WeightDistribution::Exponential1,
                                          std::uint64_t seed = 0);

/// Plain-text instance dump: header "n seed distribution", then one line
/// "u v w" per edge with u < v, weights as 17-significant-digit decimals.
void dump_instance(const WeightedGraph& g, std::ostream& out);
WeightedGraph parse_instance(std::istream& in);

} // namespace rsp

#endif
