#ifndef RSP_KMEDIAN_HPP
#define RSP_KMEDIAN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsp/metric.hpp"
#include "rsp/rng.hpp"

namespace rsp {

enum class KMedianVariant { TrivialFixed, TrivialRandom, Exact };

std::string to_string(KMedianVariant v);

struct KMedianResult {
    std::vector<int> chosen; // ascending, size k
    double cost = 0.0;       // sum over v of min_{u in chosen} d(v, u)
    KMedianVariant method = KMedianVariant::TrivialFixed;
};

/// Metric-independent center choice: the k lowest-indexed vertices
/// (TrivialFixed) or k distinct vertices from the stream (TrivialRandom).
KMedianResult trivial_kmedian(const RandomMetric& m, int k, KMedianVariant variant,
                              Rng* stream = nullptr);

/// Expected cost of any fixed k-point choice: H_{n-1} - H_{k-1}.
double expected_trivial(int n, int k);

/// One draw of the cost law, sampled directly as the sum of Exp(i) for
/// i = k..n-1 (empty for k = n).
double sample_cost_direct(int n, int k, Rng& stream);

/// One serialized k-median run: {n, k, variant, seed, cost, exact_cost?, ratio?}.
struct KMedianRunRecord {
    int n = 0;
    int k = 0;
    std::string variant;
    std::uint64_t seed = 0;
    double cost = 0.0;
    std::optional<double> exact_cost;
    std::optional<double> ratio;

    static std::string csv_header();
    std::string csv_row() const;
    std::string json() const;
};

} // namespace rsp

#endif
