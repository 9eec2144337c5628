#ifndef RSP_ORACLES_HPP
#define RSP_ORACLES_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rsp/metric.hpp"

namespace rsp {

/// Raised when an instance exceeds an oracle's size budget.
struct CapabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class OracleMethod {
    HeldKarp,
    MatchingDP,
    ExhaustivePerm,
    ExhaustiveSubset,
    FullRelaxationAPSP,
    SortedWeightPrefix,
};

/// Exact baseline value plus the witness that attains it. The witness is a
/// tour / subset (witness_vertices) or an edge set (witness_edges),
/// depending on the method.
struct OracleResult {
    double value = 0.0;
    std::vector<int> witness_vertices;
    std::vector<std::pair<int, int>> witness_edges;
    OracleMethod method = OracleMethod::HeldKarp;
};

/// Optimal tour by bitmask DP, 3 <= n <= 18.
OracleResult held_karp_tsp(const RandomMetric& m);

/// Optimal tour by scanning all (n-1)!/2 cyclic orders, n <= 10.
OracleResult exhaustive_perm_tsp(const RandomMetric& m);

/// Minimum perfect matching by subset DP, n even, n <= 20.
OracleResult exact_min_matching(const RandomMetric& m);

/// Minimum perfect matching by enumerating all (n-1)!! matchings, n even,
/// n <= 12.
OracleResult exhaustive_matching(const RandomMetric& m);

/// Optimal k-median over all C(n,k) <= 10^6 subsets.
OracleResult exact_kmedian(const RandomMetric& m, int k);

/// Same enumeration with the cost accumulation loops swapped - an
/// independent recomputation path for cross-checks.
OracleResult exact_kmedian_swapped(const RandomMetric& m, int k);

/// Sum of the mm lightest raw edge weights, 1 <= mm <= n(n-1)/2.
double sorted_weight_prefix(const WeightedGraph& g, long mm);

/// Shortest paths by cubic full relaxation, n <= 256. Shares no code with
/// the Dijkstra implementation it cross-checks.
RandomMetric full_relaxation_apsp(const WeightedGraph& g);

} // namespace rsp

#endif
