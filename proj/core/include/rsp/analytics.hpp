#ifndef RSP_ANALYTICS_HPP
#define RSP_ANALYTICS_HPP

#include <cstdint>
#include <vector>

#include "rsp/rng.hpp"

namespace rsp {

/// n-th harmonic number, sum of 1/i for i = 1..n. harmonic(0) = 0.
double harmonic(int n);

/// Expected value of tau_k on an n-vertex instance:
/// (H_{k-1} + H_{n-1} - H_{n-k}) / n.
double expected_tau(int n, int k);

/// One draw of tau_k's law, sampled directly as the sum of independent
/// Exp(i*(n-i)) variables for i = 1..k-1 (no metric involved).
double sample_tau_direct(int n, int k, Rng& stream);

/// Density threshold separating dense from sparse centers:
/// min{exp(delta*n/5), (n+1)/2}.
double s_delta(int n, double delta);

/// Closed-form CDF of a sum of n independent Exp(c*i), i = 1..n, evaluated
/// at alpha: (1 - e^{-c*alpha})^n.
double cdf_sum_exp_ci(int n, double c, double alpha);

/// One draw of the sum-of-Exp(c*i) law, term by term.
double sample_sum_exp_ci(int n, double c, Rng& stream);

/// One draw of the equivalent max-of-n-Exp(c) representation.
double sample_max_exp(int n, double c, Rng& stream);

struct TauCdfBounds {
    double lower = 0.0;
    double upper = 0.0;
};

/// Two-sided envelope for the CDF of tau_k at radius delta.
///   upper = (1 - e^{-n*delta})^{k-1}
///   lower = max of (1 - e^{-(n-k)*delta})^{k-1}
///           and    (1 - e^{-(n-1)*delta/4})^{4(k-1)/3}
/// 0 <= lower <= upper <= 1.
TauCdfBounds tau_cdf_bounds(int n, int k, double delta);

struct BallTailLower {
    double threshold = 0.0;  // s_delta
    double prob_bound = 0.0; // exp(-delta*n/5)
};

/// Small-ball tail: P(|B_delta(v)| < s_delta) <= exp(-delta*n/5).
/// Requires n >= 5.
BallTailLower ball_tail_lower(int n, double delta);

/// Large-ball tail: P(|B_delta(v)| >= exp(c*delta*n)) < exp(-(c-1)*delta*n)
/// for c > 1. Clamped to [0,1]; *clamped reports whether clamping fired.
double ball_tail_upper(int n, double delta, double c, bool* clamped = nullptr);

/// Reference envelope n^{3-c} * (ln n)^2 for the diameter tail
/// P(diam > c ln n / n), c > 3. The hidden constant is fixed to 1; tests
/// apply their own slack multiplier.
double janson_diameter_bound(int n, double c);

/// Density of a sum of Exp(i) for i = k..m at x, evaluated in log space:
/// k * C(m,k) * e^{-kx} * (1 - e^{-x})^{m-k}.
double kmedian_cost_density(int m, int k, double x);

/// Tail bound for the sum of the m lightest edge weights, m >= alpha*n:
/// P(S_m <= c) <= (e^2 c / (2 alpha^2))^{alpha*n}, clamped to [0,1].
double sm_tail_bound(int n, double alpha, double c, bool* clamped = nullptr);

/// Dvoretzky-Kiefer-Wolfowitz envelope half-width for an M-sample ECDF at
/// the given confidence: sqrt(ln(2/(1-confidence)) / (2M)).
double dkw_band(long M, double confidence);

/// Empirical CDF over a fixed sample.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> samples);

    long count() const { return static_cast<long>(sorted_.size()); }
    double value_at(double x) const; // fraction of samples <= x
    double min() const { return sorted_.front(); }
    double max() const { return sorted_.back(); }

    /// points equally spaced quantiles of the sample: levels (j+0.5)/points.
    std::vector<double> quantile_grid(int points) const;

    const std::vector<double>& sorted_samples() const { return sorted_; }

private:
    std::vector<double> sorted_;
};

/// Streaming count/mean/variance/min/max (Welford).
struct RunningStat {
    long count = 0;
    double mean = 0.0;
    double m2 = 0.0;
    double min = 0.0;
    double max = 0.0;

    void add(double x);
    double variance() const { return count > 1 ? m2 / (count - 1) : 0.0; }
    double stderr_mean() const;
};

} // namespace rsp

#endif
