#include "rsp/kmedian.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rsp/analytics.hpp"

namespace rsp {

std::string to_string(KMedianVariant v) {
    switch (v) {
    case KMedianVariant::TrivialFixed: return "fixed";
    case KMedianVariant::TrivialRandom: return "random";
    case KMedianVariant::Exact: return "exact";
    }
    return "?";
}

KMedianResult trivial_kmedian(const RandomMetric& m, int k, KMedianVariant variant, Rng* stream) {
    if (k < 1 || k > m.n) throw std::invalid_argument("trivial_kmedian: need 1 <= k <= n");
    KMedianResult result;
    result.method = variant;
    if (variant == KMedianVariant::TrivialFixed) {
        result.chosen.resize(k);
        std::iota(result.chosen.begin(), result.chosen.end(), 0);
    } else if (variant == KMedianVariant::TrivialRandom) {
        if (!stream) throw std::invalid_argument("trivial_kmedian: random variant needs a stream");
        std::vector<int> pool(m.n);
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = 0; i < k; ++i) {
            int j = i + static_cast<int>(stream->below(static_cast<std::uint64_t>(m.n - i)));
            std::swap(pool[i], pool[j]);
        }
        result.chosen.assign(pool.begin(), pool.begin() + k);
        std::sort(result.chosen.begin(), result.chosen.end());
    } else {
        throw std::invalid_argument("trivial_kmedian: use exact_kmedian for the exact variant");
    }

    double total = 0.0;
    for (int v = 0; v < m.n; ++v) {
        double best = std::numeric_limits<double>::infinity();
        for (int u : result.chosen) best = std::min(best, m.d(v, u));
        total += best;
    }
    result.cost = total;
    return result;
}

double expected_trivial(int n, int k) {
    if (n < 1 || k < 1 || k > n) throw std::invalid_argument("expected_trivial: need 1 <= k <= n");
    return harmonic(n - 1) - harmonic(k - 1);
}

double sample_cost_direct(int n, int k, Rng& stream) {
    if (n < 1 || k < 1 || k > n)
        throw std::invalid_argument("sample_cost_direct: need 1 <= k <= n");
    double total = 0.0;
    for (int i = k; i <= n - 1; ++i) total += stream.exponential(static_cast<double>(i));
    return total;
}

std::string KMedianRunRecord::csv_header() { return "n,k,variant,seed,cost,exact_cost,ratio"; }

std::string KMedianRunRecord::csv_row() const {
    char buf[64];
    std::ostringstream out;
    out << n << ',' << k << ',' << variant << ',' << seed << ',';
    std::snprintf(buf, sizeof buf, "%.17g", cost);
    out << buf << ',';
    if (exact_cost) {
        std::snprintf(buf, sizeof buf, "%.17g", *exact_cost);
        out << buf;
    }
    out << ',';
    if (ratio) {
        std::snprintf(buf, sizeof buf, "%.17g", *ratio);
        out << buf;
    }
    return out.str();
}

std::string KMedianRunRecord::json() const {
    char buf[64];
    std::ostringstream out;
    out << "{\"n\":" << n << ",\"k\":" << k << ",\"variant\":\"" << variant
        << "\",\"seed\":" << seed << ",\"cost\":";
    std::snprintf(buf, sizeof buf, "%.17g", cost);
    out << buf;
    if (exact_cost) {
        std::snprintf(buf, sizeof buf, "%.17g", *exact_cost);
        out << ",\"exact_cost\":" << buf;
    }
    if (ratio) {
        std::snprintf(buf, sizeof buf, "%.17g", *ratio);
        out << ",\"ratio\":" << buf;
    }
    out << '}';
    return out.str();
}

} // namespace rsp
