#include "rsp/oracles.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>

namespace rsp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

long long choose(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
        if (c > 2'000'000'000LL) return c; // budget checks only need "too big"
    }
    return c;
}

double kmedian_cost(const RandomMetric& m, const std::vector<int>& centers) {
    double total = 0.0;
    for (int v = 0; v < m.n; ++v) {
        double best = kInf;
        for (int u : centers) best = std::min(best, m.d(v, u));
        total += best;
    }
    return total;
}

// swapped accumulation: walk centers outermost, keep the running minimum
// per vertex, then sum
double kmedian_cost_swapped(const RandomMetric& m, const std::vector<int>& centers) {
    std::vector<double> nearest(m.n, kInf);
    for (int u : centers) {
        const double* row = m.row(u);
        for (int v = 0; v < m.n; ++v)
            if (row[v] < nearest[v]) nearest[v] = row[v];
    }
    double total = 0.0;
    for (int v = m.n - 1; v >= 0; --v) total += nearest[v];
    return total;
}

template <typename CostFn>
OracleResult kmedian_enumerate(const RandomMetric& m, int k, CostFn cost) {
    if (k < 1 || k > m.n) throw std::invalid_argument("exact_kmedian: need 1 <= k <= n");
    if (choose(m.n, k) > 1'000'000LL)
        throw CapabilityError("exact_kmedian: C(n,k) exceeds the 10^6 subset budget");
    std::vector<int> subset(k);
    std::iota(subset.begin(), subset.end(), 0);
    OracleResult best;
    best.method = OracleMethod::ExhaustiveSubset;
    best.value = kInf;
    while (true) {
        double c = cost(m, subset);
        if (c < best.value) {
            best.value = c;
            best.witness_vertices = subset;
        }
        // next lexicographic k-combination
        int i = k - 1;
        while (i >= 0 && subset[i] == m.n - k + i) --i;
        if (i < 0) break;
        ++subset[i];
        for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
    }
    return best;
}

} // namespace

OracleResult held_karp_tsp(const RandomMetric& m) {
    const int n = m.n;
    if (n < 3 || n > 18) throw CapabilityError("held_karp_tsp: supported for 3 <= n <= 18");
    const int full = (1 << n) - 1;
    const std::size_t states = static_cast<std::size_t>(1) << n;
    std::vector<double> dp(states * n, kInf);
    std::vector<signed char> parent(states * n, -1);
    dp[(1u << 0) * static_cast<std::size_t>(n) + 0] = 0.0;
    for (int mask = 1; mask <= full; ++mask) {
        if (!(mask & 1)) continue; // paths start at vertex 0
        for (int j = 0; j < n; ++j) {
            if (!(mask & (1 << j))) continue;
            double cur = dp[static_cast<std::size_t>(mask) * n + j];
            if (cur == kInf) continue;
            for (int k = 0; k < n; ++k) {
                if (mask & (1 << k)) continue;
                int next = mask | (1 << k);
                double cand = cur + m.d(j, k);
                std::size_t idx = static_cast<std::size_t>(next) * n + k;
                if (cand < dp[idx]) {
                    dp[idx] = cand;
                    parent[idx] = static_cast<signed char>(j);
                }
            }
        }
    }
    OracleResult result;
    result.method = OracleMethod::HeldKarp;
    result.value = kInf;
    int last = -1;
    for (int j = 1; j < n; ++j) {
        double cand = dp[static_cast<std::size_t>(full) * n + j] + m.d(j, 0);
        if (cand < result.value) {
            result.value = cand;
            last = j;
        }
    }
    int mask = full;
    while (last >= 0) {
        result.witness_vertices.push_back(last);
        int prev = parent[static_cast<std::size_t>(mask) * n + last];
        mask ^= 1 << last;
        last = prev;
    }
    std::reverse(result.witness_vertices.begin(), result.witness_vertices.end());
    return result;
}

OracleResult exhaustive_perm_tsp(const RandomMetric& m) {
    const int n = m.n;
    if (n < 3 || n > 10) throw CapabilityError("exhaustive_perm_tsp: supported for 3 <= n <= 10");
    std::vector<int> perm(n - 1);
    std::iota(perm.begin(), perm.end(), 1); // fix vertex 0 first
    OracleResult result;
    result.method = OracleMethod::ExhaustivePerm;
    result.value = kInf;
    do {
        double len = m.d(0, perm.front()) + m.d(perm.back(), 0);
        for (int i = 0; i + 1 < n - 1; ++i) len += m.d(perm[i], perm[i + 1]);
        if (len < result.value) {
            result.value = len;
            result.witness_vertices.assign(1, 0);
            result.witness_vertices.insert(result.witness_vertices.end(), perm.begin(),
                                           perm.end());
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return result;
}

OracleResult exact_min_matching(const RandomMetric& m) {
    const int n = m.n;
    if (n % 2 != 0 || n < 2 || n > 20)
        throw CapabilityError("exact_min_matching: supported for even n <= 20");
    const std::size_t states = static_cast<std::size_t>(1) << n;
    std::vector<double> dp(states, kInf);
    std::vector<signed char> choice(states, -1);
    dp[0] = 0.0;
    for (std::size_t mask = 1; mask < states; ++mask) {
        int u = std::countr_zero(mask);
        if ((std::popcount(mask) & 1) != 0) continue;
        for (int v = u + 1; v < n; ++v) {
            if (!(mask & (static_cast<std::size_t>(1) << v))) continue;
            std::size_t rest = mask ^ (static_cast<std::size_t>(1) << u) ^
                               (static_cast<std::size_t>(1) << v);
            double cand = dp[rest] + m.d(u, v);
            if (cand < dp[mask]) {
                dp[mask] = cand;
                choice[mask] = static_cast<signed char>(v);
            }
        }
    }
    OracleResult result;
    result.method = OracleMethod::MatchingDP;
    result.value = dp[states - 1];
    std::size_t mask = states - 1;
    while (mask) {
        int u = std::countr_zero(mask);
        int v = choice[mask];
        result.witness_edges.emplace_back(u, v);
        mask ^= (static_cast<std::size_t>(1) << u) | (static_cast<std::size_t>(1) << v);
    }
    return result;
}

OracleResult exhaustive_matching(const RandomMetric& m) {
    const int n = m.n;
    if (n % 2 != 0 || n < 2 || n > 12)
        throw CapabilityError("exhaustive_matching: supported for even n <= 12");
    OracleResult result;
    result.method = OracleMethod::ExhaustivePerm;
    result.value = kInf;
    std::vector<std::pair<int, int>> current;
    std::vector<char> used(n, 0);
    // recursive enumeration: always pair the lowest unused vertex
    auto recurse = [&](auto&& self, double acc) -> void {
        int u = 0;
        while (u < n && used[u]) ++u;
        if (u == n) {
            if (acc < result.value) {
                result.value = acc;
                result.witness_edges = current;
            }
            return;
        }
        used[u] = 1;
        for (int v = u + 1; v < n; ++v) {
            if (used[v]) continue;
            used[v] = 1;
            current.emplace_back(u, v);
            self(self, acc + m.d(u, v));
            current.pop_back();
            used[v] = 0;
        }
        used[u] = 0;
    };
    recurse(recurse, 0.0);
    return result;
}

OracleResult exact_kmedian(const RandomMetric& m, int k) {
    return kmedian_enumerate(m, k, [](const RandomMetric& mm, const std::vector<int>& s) {
        return kmedian_cost(mm, s);
    });
}

OracleResult exact_kmedian_swapped(const RandomMetric& m, int k) {
    return kmedian_enumerate(m, k, [](const RandomMetric& mm, const std::vector<int>& s) {
        return kmedian_cost_swapped(mm, s);
    });
}

double sorted_weight_prefix(const WeightedGraph& g, long mm) {
    const long edges = static_cast<long>(g.edge_count());
    if (mm < 1 || mm > edges)
        throw std::invalid_argument("sorted_weight_prefix: mm out of [1, n(n-1)/2]");
    std::vector<double> w = g.weights;
    std::nth_element(w.begin(), w.begin() + (mm - 1), w.end());
    double total = 0.0;
    for (long i = 0; i < mm; ++i) total += w[i];
    return total;
}

RandomMetric full_relaxation_apsp(const WeightedGraph& g) {
    if (g.n > 256) throw CapabilityError("full_relaxation_apsp: supported for n <= 256");
    const int n = g.n;
    RandomMetric m;
    m.n = n;
    m.source_graph = g;
    m.dist = g.dense_weights();
    for (int k = 0; k < n; ++k) {
        const double* via = m.dist.data() + static_cast<std::size_t>(k) * n;
        for (int i = 0; i < n; ++i) {
            double dik = m.dist[static_cast<std::size_t>(i) * n + k];
            double* row = m.dist.data() + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j) {
                double cand = dik + via[j];
                if (cand < row[j]) row[j] = cand;
            }
        }
    }
    return m;
}

} // namespace rsp
