#include "rsp/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsp {
namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// (1 - e^{-x})^p in log space; x >= 0, p >= 0.
double one_minus_exp_pow(double x, double p) {
    if (p == 0.0) return 1.0;
    if (x <= 0.0) return 0.0;
    double log_base = std::log1p(-std::exp(-x)); // <= 0
    return std::exp(p * log_base);
}

double clamp01(double x, bool* clamped) {
    if (x < 0.0 || x > 1.0) {
        if (clamped) *clamped = true;
        return x < 0.0 ? 0.0 : 1.0;
    }
    return x;
}

} // namespace

double harmonic(int n) {
    require(n >= 0, "harmonic: n must be >= 0");
    double h = 0.0;
    for (int i = n; i >= 1; --i) h += 1.0 / i; // small terms first
    return h;
}

double expected_tau(int n, int k) {
    require(n >= 1 && k >= 1 && k <= n, "expected_tau: need 1 <= k <= n");
    return (harmonic(k - 1) + harmonic(n - 1) - harmonic(n - k)) / n;
}

double sample_tau_direct(int n, int k, Rng& stream) {
    require(n >= 1 && k >= 1 && k <= n, "sample_tau_direct: need 1 <= k <= n");
    double t = 0.0;
    for (int i = 1; i < k; ++i)
        t += stream.exponential(static_cast<double>(i) * (n - i));
    return t;
}

double s_delta(int n, double delta) {
    return std::min(std::exp(delta * n / 5.0), (n + 1) / 2.0);
}

double cdf_sum_exp_ci(int n, double c, double alpha) {
    require(n >= 1, "cdf_sum_exp_ci: n must be >= 1");
    require(c > 0.0, "cdf_sum_exp_ci: c must be > 0");
    require(alpha >= 0.0, "cdf_sum_exp_ci: alpha must be >= 0");
    return one_minus_exp_pow(c * alpha, static_cast<double>(n));
}

double sample_sum_exp_ci(int n, double c, Rng& stream) {
    require(n >= 1 && c > 0.0, "sample_sum_exp_ci: need n >= 1, c > 0");
    double t = 0.0;
    for (int i = 1; i <= n; ++i) t += stream.exponential(c * i);
    return t;
}

double sample_max_exp(int n, double c, Rng& stream) {
    require(n >= 1 && c > 0.0, "sample_max_exp: need n >= 1, c > 0");
    double best = 0.0;
    for (int i = 0; i < n; ++i) best = std::max(best, stream.exponential(c));
    return best;
}

TauCdfBounds tau_cdf_bounds(int n, int k, double delta) {
    require(n >= 1 && k >= 1 && k <= n, "tau_cdf_bounds: need 1 <= k <= n");
    require(delta >= 0.0, "tau_cdf_bounds: delta must be >= 0");
    const double p = k - 1.0;
    TauCdfBounds b;
    b.upper = one_minus_exp_pow(n * delta, p);
    double lower_gap = one_minus_exp_pow((n - k) * delta, p);
    double lower_quarter = one_minus_exp_pow((n - 1) * delta / 4.0, 4.0 * p / 3.0);
    b.lower = std::max(lower_gap, lower_quarter);
    b.lower = std::min(b.lower, b.upper); // guard against rounding
    return b;
}

BallTailLower ball_tail_lower(int n, double delta) {
    require(n >= 5, "ball_tail_lower: proven only for n >= 5");
    require(delta >= 0.0, "ball_tail_lower: delta must be >= 0");
    return {s_delta(n, delta), std::exp(-delta * n / 5.0)};
}

double ball_tail_upper(int n, double delta, double c, bool* clamped) {
    require(c > 1.0, "ball_tail_upper: c must be > 1");
    require(delta >= 0.0, "ball_tail_upper: delta must be >= 0");
    if (clamped) *clamped = false;
    return clamp01(std::exp(-(c - 1.0) * delta * n), clamped);
}

double janson_diameter_bound(int n, double c) {
    require(n >= 2, "janson_diameter_bound: n must be >= 2");
    require(c > 3.0, "janson_diameter_bound: c must be > 3");
    double ln_n = std::log(static_cast<double>(n));
    return std::exp((3.0 - c) * ln_n) * ln_n * ln_n;
}

double kmedian_cost_density(int m, int k, double x) {
    require(m >= 1 && k >= 1 && k <= m, "kmedian_cost_density: need 1 <= k <= m");
    require(x >= 0.0, "kmedian_cost_density: x must be >= 0");
    double log_f = std::log(static_cast<double>(k)) + std::lgamma(m + 1.0) -
                   std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0) - k * x;
    if (m > k) {
        if (x == 0.0) return 0.0;
        log_f += (m - k) * std::log1p(-std::exp(-x));
    }
    return std::exp(log_f);
}

double sm_tail_bound(int n, double alpha, double c, bool* clamped) {
    require(alpha > 0.0 && alpha <= 1.0, "sm_tail_bound: alpha must be in (0,1]");
    require(c >= 0.0 && c <= 1.0, "sm_tail_bound: c must be in [0,1]");
    require(n >= 1, "sm_tail_bound: n must be >= 1");
    if (clamped) *clamped = false;
    if (c == 0.0) return 0.0;
    double log_ratio = 2.0 + std::log(c) - std::log(2.0 * alpha * alpha);
    return clamp01(std::exp(alpha * n * log_ratio), clamped);
}

double dkw_band(long M, double confidence) {
    require(M >= 1, "dkw_band: M must be >= 1");
    require(confidence > 0.0 && confidence < 1.0, "dkw_band: confidence must be in (0,1)");
    return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(M)));
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    require(!sorted_.empty(), "EmpiricalCdf: empty sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::value_at(double x) const {
    auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

std::vector<double> EmpiricalCdf::quantile_grid(int points) const {
    require(points >= 1, "EmpiricalCdf::quantile_grid: points must be >= 1");
    std::vector<double> grid(points);
    const std::size_t M = sorted_.size();
    for (int j = 0; j < points; ++j) {
        double level = (j + 0.5) / points;
        std::size_t idx = static_cast<std::size_t>(level * M);
        if (idx >= M) idx = M - 1;
        grid[j] = sorted_[idx];
    }
    return grid;
}

void RunningStat::add(double x) {
    if (count == 0) {
        min = max = x;
    } else {
        if (x < min) min = x;
        if (x > max) max = x;
    }
    ++count;
    double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
}

double RunningStat::stderr_mean() const {
    if (count < 2) return 0.0;
    return std::sqrt(variance() / count);
}

} // namespace rsp
