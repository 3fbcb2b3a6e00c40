// Statistics checks: dispersion test calibration and power, binomial pmf,
// Wilson intervals, Pass@k estimators, and histogram IoU. Numeric expected
// values were frozen from independent high-precision references.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "passk/errors.hpp"
#include "passk/rng.hpp"
#include "passk/stats.hpp"

using namespace passk;

TEST_CASE("variant counts validate") {
    VariantCounts bad{{3, -1}, 5};
    CHECK_THROWS_AS(bad.validate(), domain_error);
    VariantCounts over{{6}, 5};
    CHECK_THROWS_AS(over.validate(), domain_error);
    VariantCounts none{{}, 5};
    CHECK_THROWS_AS(none.validate(), domain_error);
    VariantCounts ok{{0, 5, 3}, 5};
    CHECK_NOTHROW(ok.validate());
    CHECK(pooled_rate(ok).value() == Catch::Approx(8.0 / 15.0).margin(1e-15));
}

TEST_CASE("pearson dispersion statistic value") {
    // counts {2, 8} with n=10: pooled p = 0.5, denom = 2.5, T = (9+9)/2.5 = 7.2
    std::vector<int> counts{2, 8};
    double t = detail::dispersion_statistic(counts, 10, 0.5, TestStatistic::pearson_dispersion);
    CHECK(t == Catch::Approx(7.2).margin(1e-12));
    // Perfectly uniform counts give zero.
    std::vector<int> flat{5, 5, 5};
    CHECK(detail::dispersion_statistic(flat, 10, 0.5, TestStatistic::pearson_dispersion) ==
          Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("degenerate pooled rates short-circuit") {
    VariantCounts zeros{{0, 0, 0}, 6};
    auto r0 = inconsistency_test(zeros, 1000, 1);
    CHECK(r0.degenerate);
    CHECK(r0.p_value == 1.0);
    VariantCounts full{{6, 6, 6}, 6};
    auto r1 = inconsistency_test(full, 1000, 1);
    CHECK(r1.degenerate);
}

TEST_CASE("inconsistency test rejects obvious overdispersion") {
    // Half the variants at rate ~0, half at ~1: wildly non-binomial.
    VariantCounts counts{{0, 1, 0, 0, 1, 19, 20, 20, 18, 20}, 20};
    auto r = inconsistency_test(counts, 10000, 7);
    CHECK(r.p_value < 1e-3);
    CHECK(r.statistic > 100.0);

    auto lr = inconsistency_test(counts, 10000, 7, TestStatistic::likelihood_ratio);
    CHECK(lr.p_value < 1e-3);
}

TEST_CASE("inconsistency test accepts binomial data") {
    // Draw counts from a single binomial and expect unremarkable p-values.
    rng::Stream root(2718);
    int rejections = 0;
    const int runs = 60;
    for (int run = 0; run < runs; ++run) {
        rng::Stream s = root.fold(run);
        VariantCounts counts;
        counts.trials_per_variant = 15;
        for (int i = 0; i < 25; ++i) {
            int c = 0;
            for (int t = 0; t < 15; ++t) c += s.next_bernoulli(0.35) ? 1 : 0;
            counts.successes.push_back(c);
        }
        auto r = inconsistency_test(counts, 2000, 1000 + run);
        if (r.p_value < 0.05) ++rejections;
    }
    // ~5% expected; allow generous slack for 60 runs.
    CHECK(rejections <= 9);
}

TEST_CASE("inconsistency test is deterministic and add-one bounded") {
    VariantCounts counts{{3, 5, 2, 7, 4, 6}, 10};
    auto a = inconsistency_test(counts, 5000, 99);
    auto b = inconsistency_test(counts, 5000, 99);
    CHECK(a.p_value == b.p_value);
    CHECK(a.p_value >= 1.0 / 5001.0);
    CHECK(a.p_value <= 1.0);
    CHECK_THROWS_AS(inconsistency_test(counts, 999, 1), domain_error);
    VariantCounts single{{3}, 10};
    CHECK_THROWS_AS(inconsistency_test(single, 5000, 1), protocol_error);
}

TEST_CASE("null success pmf matches reference binomial values") {
    auto pmf = null_success_pmf(50, 0.3);
    REQUIRE(pmf.size() == 51);
    // pmf(15; 50, 0.3) from an exact-arithmetic reference.
    CHECK(pmf[15] == Catch::Approx(0.1223468618354012).epsilon(1e-12));
    CHECK(std::accumulate(pmf.begin(), pmf.end(), 0.0) == Catch::Approx(1.0).margin(1e-12));
    auto degenerate = null_success_pmf(10, 0.0);
    CHECK(degenerate[0] == 1.0);
    auto sure = null_success_pmf(10, 1.0);
    CHECK(sure[10] == 1.0);
}

TEST_CASE("inverse normal cdf hits standard quantiles") {
    CHECK(detail::inverse_normal_cdf(0.975) == Catch::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(detail::inverse_normal_cdf(0.5) == Catch::Approx(0.0).margin(1e-12));
    CHECK(detail::inverse_normal_cdf(0.025) == Catch::Approx(-1.959963984540054).epsilon(1e-12));
    CHECK(detail::inverse_normal_cdf(0.995) == Catch::Approx(2.5758293035489004).epsilon(1e-12));
    CHECK(detail::inverse_normal_cdf(1e-9) == Catch::Approx(-5.997807015007674).epsilon(1e-9));
    CHECK_THROWS_AS(detail::inverse_normal_cdf(0.0), domain_error);
    CHECK_THROWS_AS(detail::inverse_normal_cdf(1.0), domain_error);
}

TEST_CASE("wilson interval matches reference values") {
    // 95 successes out of 150 at 95% confidence.
    auto iv = wilson_interval(95, 150, 0.95);
    CHECK(iv.lower == Catch::Approx(0.553782).margin(5e-7));
    CHECK(iv.upper == Catch::Approx(0.706226).margin(5e-7));
    // Interval always contains the point estimate and stays in [0, 1].
    for (long long c : {0LL, 1LL, 75LL, 149LL, 150LL}) {
        auto v = wilson_interval(c, 150, 0.95);
        double p = c / 150.0;
        CHECK(v.lower >= 0.0);
        CHECK(v.upper <= 1.0);
        CHECK(v.lower <= p + 1e-12);
        CHECK(v.upper >= p - 1e-12);
    }
    CHECK_THROWS_AS(wilson_interval(5, 0, 0.95), domain_error);
    CHECK_THROWS_AS(wilson_interval(-1, 10, 0.95), domain_error);
    CHECK_THROWS_AS(wilson_interval(5, 10, 1.0), domain_error);
}

TEST_CASE("combinatorial pass@k estimator") {
    // n=4, c=2, k=2: 1 - C(2,2)/C(4,2) = 1 - 1/6 = 5/6.
    CHECK(pass_at_k_combinatorial(4, 2, 2).value.value() ==
          Catch::Approx(5.0 / 6.0).margin(1e-12));
    CHECK(pass_at_k_combinatorial(10, 0, 3).value.value() == 0.0);
    CHECK(pass_at_k_combinatorial(10, 10, 3).value.value() == 1.0);
    // c > n - k forces at least one success in every draw of k.
    CHECK(pass_at_k_combinatorial(10, 9, 3).value.value() == 1.0);
    CHECK_THROWS_AS(pass_at_k_combinatorial(5, 2, 6), domain_error);
    CHECK_THROWS_AS(pass_at_k_combinatorial(5, 6, 2), domain_error);
}

TEST_CASE("combinatorial estimator is unbiased for binomial data") {
    // Average the estimator over many simulated (n, c) draws and compare
    // with the true pass@k.
    const int n = 20, k = 5;
    const double p = 0.15;
    const double truth = u_k(p, k);
    rng::Stream s(31415);
    double acc = 0.0;
    const int reps = 100000;
    for (int r = 0; r < reps; ++r) {
        int c = 0;
        for (int i = 0; i < n; ++i) c += s.next_bernoulli(p) ? 1 : 0;
        acc += pass_at_k_combinatorial(n, c, k).value.value();
    }
    double mean = acc / reps;
    CHECK(std::abs(mean - truth) < 0.004);  // ~4 SE of the Monte-Carlo average
    // Plug-in is biased upward here; check the direction for contrast.
    double plug_acc = 0.0;
    rng::Stream s2(31415);
    for (int r = 0; r < reps; ++r) {
        int c = 0;
        for (int i = 0; i < n; ++i) c += s2.next_bernoulli(p) ? 1 : 0;
        plug_acc += pass_at_k_plug_in(static_cast<double>(c) / n, k).value.value();
    }
    CHECK(plug_acc / reps < mean);
}

TEST_CASE("histogram iou") {
    // Identical samples: IoU 1. Disjoint bins: IoU 0.
    std::vector<double> a{0.05, 0.15, 0.25, 0.35};
    CHECK(histogram_iou(a, a, 10) == Catch::Approx(1.0).margin(1e-12));
    std::vector<double> lo{0.05, 0.15}, hi{0.85, 0.95};
    CHECK(histogram_iou(lo, hi, 10) == Catch::Approx(0.0).margin(1e-12));
    // Half overlap: masses {.5,.5,0} vs {0,.5,.5} give 0.5/1.5 = 1/3.
    std::vector<double> left{0.1, 0.4}, right{0.4, 0.7};
    CHECK(histogram_iou(left, right, 3) == Catch::Approx(1.0 / 3.0).margin(1e-12));
    // 1.0 lands in the top bin, not out of range.
    std::vector<double> edge{1.0};
    CHECK_NOTHROW(histogram_iou(edge, edge, 10));
    CHECK_THROWS_AS(histogram_iou(std::vector<double>{}, a, 10), domain_error);
    CHECK_THROWS_AS(histogram_iou(a, a, 0), domain_error);
}
