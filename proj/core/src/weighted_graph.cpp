#include "rsp/weighted_graph.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rsp/rng.hpp"

namespace rsp {

std::string to_string(WeightDistribution d) {
    return d == WeightDistribution::Exponential1 ? "Exponential1" : "Uniform01";
}

WeightDistribution weight_distribution_from_string(const std::string& s) {
    if (s == "Exponential1" || s == "exp" || s == "exponential")
        return WeightDistribution::Exponential1;
    if (s == "Uniform01" || s == "uniform")
        return WeightDistribution::Uniform01;
    throw std::invalid_argument("unknown weight distribution: " + s);
}

std::vector<double> WeightedGraph::dense_weights() const {
    std::vector<double> w(static_cast<std::size_t>(n) * n, 0.0);
    std::size_t idx = 0;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v, ++idx) {
            w[static_cast<std::size_t>(u) * n + v] = weights[idx];
            w[static_cast<std::size_t>(v) * n + u] = weights[idx];
        }
    }
    return w;
}

WeightedGraph generate_weights(int n, WeightDistribution dist, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("generate_weights: need n >= 2");
    WeightedGraph g;
    g.n = n;
    g.distribution = dist;
    g.seed = seed;
    g.weights.resize(static_cast<std::size_t>(n) * (n - 1) / 2);
    Rng rng(seed);
    if (dist == WeightDistribution::Exponential1) {
        for (double& w : g.weights) w = rng.exponential();
    } else {
        for (double& w : g.weights) w = rng.uniform();
    }
    return g;
}

WeightedGraph weighted_graph_from_weights(int n, std::vector<double> weights,
                                          WeightDistribution dist, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("weighted_graph_from_weights: need n >= 2");
    if (weights.size() != static_cast<std::size_t>(n) * (n - 1) / 2)
        throw std::invalid_argument("weighted_graph_from_weights: wrong weight count");
    WeightedGraph g;
    g.n = n;
    g.distribution = dist;
    g.seed = seed;
    g.weights = std::move(weights);
    return g;
}

void dump_instance(const WeightedGraph& g, std::ostream& out) {
    out << g.n << ' ' << g.seed << ' ' << to_string(g.distribution) << '\n';
    char buf[64];
    std::size_t idx = 0;
    for (int u = 0; u < g.n; ++u) {
        for (int v = u + 1; v < g.n; ++v, ++idx) {
            std::snprintf(buf, sizeof buf, "%.17g", g.weights[idx]);
            out << u << ' ' << v << ' ' << buf << '\n';
        }
    }
}

WeightedGraph parse_instance(std::istream& in) {
    int n = 0;
    std::uint64_t seed = 0;
    std::string dist;
    if (!(in >> n >> seed >> dist)) throw std::invalid_argument("parse_instance: bad header");
    if (n < 2) throw std::invalid_argument("parse_instance: bad n");
    WeightedGraph g;
    g.n = n;
    g.seed = seed;
    g.distribution = weight_distribution_from_string(dist);
    g.weights.assign(static_cast<std::size_t>(n) * (n - 1) / 2, 0.0);
    std::size_t edges = g.weights.size();
    for (std::size_t i = 0; i < edges; ++i) {
        int u, v;
        double w;
        if (!(in >> u >> v >> w)) throw std::invalid_argument("parse_instance: truncated edge list");
        if (u < 0 || v <= u || v >= n) throw std::invalid_argument("parse_instance: bad edge endpoints");
        g.weights[WeightedGraph::pair_index(n, u, v)] = w;
    }
    return g;
}

} // namespace rsp
