#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "verblunsky/series_ops.hpp"

#include <cmath>
#include <random>

using namespace verblunsky;

TEST_CASE("gamma ratio recurrence") {
    const auto c = gamma_ratio_seq(1.0, [](std::size_t n) { return (n + 0.4) / (n + 1); }, 3);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == 1.0);
    CHECK(c[1] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(c[2] == doctest::Approx(0.28).epsilon(1e-15));

    // a'_0 = -1, a'_1 = d under the recurrence out[n+1] = out[n] (n-d)/(n+1)
    const auto a = gamma_ratio_seq(-1.0, [](std::size_t n) { return (n - 0.4) / (n + 1); }, 2);
    CHECK(a[0] == -1.0);
    CHECK(a[1] == doctest::Approx(0.4).epsilon(1e-15));

    const auto ones = gamma_ratio_seq(5.0, [](std::size_t) { return 1.0; }, 4);
    for (double v : ones) CHECK(v == 5.0);

    CHECK_THROWS_WITH_AS(
        gamma_ratio_seq(1e300, [](std::size_t) { return 1e300; }, 3),
        doctest::Contains("overflow in recurrence"), std::runtime_error);
}

TEST_CASE("rational series expansion") {
    const RealSeq geo = rational_series(RealSeq{1.0}, RealSeq{1.0, -0.5}, 4);
    const RealSeq want{1.0, 0.5, 0.25, 0.125};
    for (std::size_t i = 0; i < 4; ++i) CHECK(geo[i] == want[i]);

    const RealSeq poly = rational_series(RealSeq{1.0, 0.4}, RealSeq{1.0}, 3);
    CHECK(poly[0] == 1.0);
    CHECK(poly[1] == 0.4);
    CHECK(poly[2] == 0.0);

    CHECK_THROWS_WITH_AS(rational_series(RealSeq{1.0}, RealSeq{0.0, 1.0}, 3),
                         doctest::Contains("non-invertible constant term"),
                         std::invalid_argument);
}

TEST_CASE("rational series times denominator returns numerator") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(-0.45, 0.45);
    for (int trial = 0; trial < 20; ++trial) {
        RealSeq num{1.0}, den{1.0};
        for (int i = 0; i < 3; ++i) num.push_back(uni(rng));
        for (int i = 0; i < 3; ++i) den.push_back(uni(rng));
        const std::size_t L = 64;
        const RealSeq r = rational_series(num, den, L);
        for (std::size_t n = 0; n < L; ++n) {
            double conv = 0.0;
            for (std::size_t k = 0; k < den.size() && k <= n; ++k) conv += den[k] * r[n - k];
            const double target = n < num.size() ? num[n] : 0.0;
            CHECK(std::abs(conv - target) <= 1e-13);
        }
    }
}

TEST_CASE("correlate_tail hand values") {
    const RealSeq b{0, 1, 2, 3, 4};
    const RealSeq x{1, 1};
    const RealSeq y = correlate_tail(b, x, 1, 2, CorrelateMode::naive);
    CHECK(y[0] == 3.0);
    CHECK(y[1] == 5.0);

    // delta input picks out a segment of b
    const RealSeq e0{1.0};
    const RealSeq seg = correlate_tail(b, e0, 2, 3, CorrelateMode::naive);
    CHECK(seg[0] == 2.0);
    CHECK(seg[1] == 3.0);
    CHECK(seg[2] == 4.0);

    CHECK_THROWS_WITH_AS(correlate_tail(b, x, 3, 2, CorrelateMode::naive),
                         doctest::Contains("need length >= 6"), std::invalid_argument);
}

TEST_CASE("fft and naive correlation agree") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (std::size_t len : {std::size_t{64}, std::size_t{500}, std::size_t{513},
                            std::size_t{4096}, std::size_t{8192}}) {
        RealSeq b(3 * len), x(len);
        for (double& v : b) v = uni(rng);
        for (double& v : x) v = uni(rng);
        const RealSeq yn = correlate_tail(b, x, 1, len, CorrelateMode::naive);
        const RealSeq yf = correlate_tail(b, x, 1, len, CorrelateMode::fft);
        double scale = 0.0, diff = 0.0;
        for (double v : yn) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < len; ++i) diff = std::max(diff, std::abs(yn[i] - yf[i]));
        CHECK(diff <= 1e-12 * scale);
    }
}

TEST_CASE("compensated summation") {
    RealSeq xs{1.0};
    for (int i = 0; i < 100000; ++i) xs.push_back(1e-16);
    const double s = compensated_sum(xs);
    CHECK(s == doctest::Approx(1.0 + 1e-11).epsilon(1e-12));
}
