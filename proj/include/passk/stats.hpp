// Statistical machinery for the inconsistency experiments: the binomial-null
// dispersion test with Monte-Carlo p-value, the null success pmf, Wilson
// score intervals, Pass@k estimators from counts, and histogram IoU.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "passk/errors.hpp"
#include "passk/probability.hpp"
#include "passk/rng.hpp"
#include "passk/spread_model.hpp"

namespace passk {

struct VariantCounts {
    std::vector<int> successes;  // c_i per variant
    int trials_per_variant = 0;  // n

    void validate() const {
        if (successes.empty()) throw domain_error("variant counts must be non-empty");
        if (trials_per_variant < 1) throw domain_error("trials_per_variant must be >= 1");
        for (int c : successes) {
            if (c < 0 || c > trials_per_variant) {
                throw domain_error("success count " + std::to_string(c) +
                                   " outside [0, n=" + std::to_string(trials_per_variant) + "]");
            }
        }
    }
};

inline Probability pooled_rate(const VariantCounts& counts) {
    counts.validate();
    long long total = std::accumulate(counts.successes.begin(), counts.successes.end(), 0LL);
    return static_cast<double>(total) /
           (static_cast<double>(counts.successes.size()) * counts.trials_per_variant);
}

// The dispersion statistics measure how far the per-variant counts spread
// beyond a single binomial law. Both are one-sided: large values indicate
// overdispersion.
enum class TestStatistic { pearson_dispersion, likelihood_ratio };

struct InconsistencyTestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    long long replicates = 0;
    Probability pooled_rate;
    bool degenerate = false;  // pooled rate was exactly 0 or 1
    TestStatistic statistic_kind = TestStatistic::pearson_dispersion;
};

namespace detail {

inline double dispersion_statistic(std::span<const int> counts, int n, double p_hat,
                                   TestStatistic kind) {
    if (p_hat <= 0.0 || p_hat >= 1.0) return 0.0;
    double t = 0.0;
    if (kind == TestStatistic::pearson_dispersion) {
        double denom = n * p_hat * (1.0 - p_hat);
        for (int c : counts) {
            double d = c - n * p_hat;
            t += d * d / denom;
        }
    } else {
        // G-statistic: 2 * sum of observed * log(observed/expected) over both cells
        for (int c : counts) {
            double f = n - c;
            if (c > 0) t += 2.0 * c * std::log(c / (n * p_hat));
            if (f > 0) t += 2.0 * f * std::log(f / (n * (1.0 - p_hat)));
        }
    }
    return t;
}

// Cumulative Bin(n, p) table for repeated inverse-cdf draws.
inline std::vector<double> binomial_cdf_table(int n, double p) {
    std::vector<double> cdf(n + 1);
    double log_p = std::log(p), log_q = std::log1p(-p);
    double acc = 0.0;
    for (int x = 0; x <= n; ++x) {
        double log_pmf = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0) +
                         x * log_p + (n - x) * log_q;
        acc += std::exp(log_pmf);
        cdf[x] = acc;
    }
    cdf[n] = 1.0;
    return cdf;
}

inline int draw_from_cdf(std::span<const double> cdf, double u) {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(), cdf.size() - 1));
}

}  // namespace detail

// Parametric-bootstrap test of the null "all variants share one success
// rate". Observed dispersion is compared against `replicates` datasets of m
// draws from Bin(n, pooled rate), with the pooled rate re-estimated inside
// each replicate. p-value uses the add-one convention, so it is never 0 and
// never below 1/(replicates+1).
inline InconsistencyTestResult inconsistency_test(const VariantCounts& counts,
                                                  long long replicates, std::uint64_t seed,
                                                  TestStatistic kind = TestStatistic::pearson_dispersion) {
    counts.validate();
    const int m = static_cast<int>(counts.successes.size());
    if (m < 2) throw protocol_error("inconsistency test requires at least 2 variants");
    if (replicates < 1000) throw domain_error("replicates must be >= 1000");

    InconsistencyTestResult result;
    result.replicates = replicates;
    result.statistic_kind = kind;
    result.pooled_rate = pooled_rate(counts);

    const int n = counts.trials_per_variant;
    const double p_hat = result.pooled_rate;
    if (p_hat <= 0.0 || p_hat >= 1.0) {
        result.degenerate = true;
        result.p_value = 1.0;
        return result;
    }
    result.statistic = detail::dispersion_statistic(counts.successes, n, p_hat, kind);

    const auto cdf = detail::binomial_cdf_table(n, p_hat);
    const rng::Stream root(seed);
    std::vector<int> rep(m);
    long long at_least = 0;
    for (long long r = 0; r < replicates; ++r) {
        rng::Stream stream = root.fold(static_cast<std::uint64_t>(r));
        long long total = 0;
        for (int i = 0; i < m; ++i) {
            rep[i] = detail::draw_from_cdf(cdf, stream.next_unit());
            total += rep[i];
        }
        double p_rep = static_cast<double>(total) / (static_cast<double>(m) * n);
        double t_rep = detail::dispersion_statistic(rep, n, p_rep, kind);
        if (t_rep >= result.statistic) ++at_least;
    }
    result.p_value = static_cast<double>(1 + at_least) / static_cast<double>(replicates + 1);
    return result;
}

// Bin(n, p) probability mass over {0, ..., n}; the null-hypothesis overlay
// for the success-count histograms.
inline std::vector<double> null_success_pmf(int n, double p) {
    if (n < 1) throw domain_error("n must be >= 1");
    Probability checked(p);
    std::vector<double> pmf(n + 1, 0.0);
    if (checked.value() == 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (checked.value() == 1.0) {
        pmf[n] = 1.0;
        return pmf;
    }
    double log_p = std::log(checked.value()), log_q = std::log1p(-checked.value());
    for (int x = 0; x <= n; ++x) {
        pmf[x] = std::exp(std::lgamma(n + 1.0) - std::lgamma(x + 1.0) -
                          std::lgamma(n - x + 1.0) + x * log_p + (n - x) * log_q);
    }
    return pmf;
}

namespace detail {

// Inverse standard normal cdf, Acklam's rational approximation with one
// Halley refinement step (|relative error| < 1e-15 after refinement).
inline double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) throw domain_error("normal quantile requires p in (0, 1)");
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement against erfc.
    double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

}  // namespace detail

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

inline Interval wilson_interval(long long successes, long long trials, double confidence) {
    if (trials < 1) throw domain_error("trials must be >= 1");
    if (successes < 0 || successes > trials) throw domain_error("successes outside [0, trials]");
    if (!(confidence > 0.0 && confidence < 1.0)) throw domain_error("confidence must be in (0, 1)");

    double z = detail::inverse_normal_cdf(0.5 + confidence / 2.0);
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct PassAtKEstimate {
    enum class Method { plug_in, combinatorial };
    int k = 1;
    Probability value;
    Method method = Method::plug_in;
};

inline PassAtKEstimate pass_at_k_plug_in(double p_hat, int k) {
    return {k, u_k(p_hat, k), PassAtKEstimate::Method::plug_in};
}

// Unbiased estimator 1 - C(n-c, k)/C(n, k), via log-factorials.
inline PassAtKEstimate pass_at_k_combinatorial(long long n, long long c, int k) {
    check_k(k);
    if (n < 1) throw domain_error("n must be >= 1");
    if (c < 0 || c > n) throw domain_error("c outside [0, n]");
    if (k > n) throw domain_error("k must not exceed n");

    if (c == 0) return {k, 0.0, PassAtKEstimate::Method::combinatorial};
    if (c > n - k) return {k, 1.0, PassAtKEstimate::Method::combinatorial};
    double log_ratio = std::lgamma(n - c + 1.0) + std::lgamma(n - k + 1.0) -
                       std::lgamma(n - c - k + 1.0) - std::lgamma(n + 1.0);
    return {k, 1.0 - std::exp(log_ratio), PassAtKEstimate::Method::combinatorial};
}

// Overlap of two success-rate samples after binning into `bin_count`
// equal-width bins over [0, 1]: sum of elementwise minima over sum of
// elementwise maxima of the normalized mass vectors.
inline double histogram_iou(std::span<const double> samples_a, std::span<const double> samples_b,
                            int bin_count) {
    if (samples_a.empty() || samples_b.empty()) throw domain_error("histogram_iou requires non-empty samples");
    if (bin_count < 1) throw domain_error("bin_count must be >= 1");

    auto bin_mass = [bin_count](std::span<const double> samples) {
        std::vector<double> mass(bin_count, 0.0);
        for (double v : samples) {
            Probability checked(v);
            int b = std::min(bin_count - 1, static_cast<int>(checked.value() * bin_count));
            mass[b] += 1.0;
        }
        for (double& m : mass) m /= static_cast<double>(samples.size());
        return mass;
    };

    auto a = bin_mass(samples_a), b = bin_mass(samples_b);
    double inter = 0.0, uni = 0.0;
    for (int i = 0; i < bin_count; ++i) {
        inter += std::min(a[i], b[i]);
        uni += std::max(a[i], b[i]);
    }
    return uni > 0.0 ? inter / uni : 1.0;
}

}  // namespace passk
