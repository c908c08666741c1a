#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "verblunsky/analysis.hpp"

#include <cmath>
#include <numbers>

using namespace verblunsky;
using namespace vbtest;

TEST_CASE("arcsin coefficients") {
    const RealSeq t = tau(60);
    CHECK(t[0] == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
    CHECK(t[1] == doctest::Approx(1.0 / (6.0 * std::numbers::pi)).epsilon(1e-15));
    for (std::size_t k = 1; k < 60; ++k) {
        CHECK(t[k] > 0.0);
        CHECK(t[k] < t[k - 1]);
    }
    double s = 0.0;
    for (std::size_t k = 1; k <= 50; ++k) s += t[k - 1] * std::pow(0.5, double(2 * k - 1));
    CHECK(std::abs(s - 1.0 / 6.0) <= 1e-12);
}

TEST_CASE("exact long-memory references") {
    const auto [beta25, alpha25] = exact_farima_refs(0.25, 4);
    CHECK(beta25[1] == doctest::Approx(0.3001054387).epsilon(1e-9));
    const auto [beta3, alpha3] = exact_farima_refs(0.3, 4);
    CHECK(alpha3[1] == doctest::Approx(0.3 / 1.7).epsilon(1e-14));
    const auto [beta_small, alpha_small] = exact_farima_refs(1e-8, 4);
    CHECK(beta_small[0] == doctest::Approx(-1.0).epsilon(1e-7));
    for (std::size_t n = 1; n < beta_small.size(); ++n)
        CHECK(std::abs(beta_small[n]) <= 1e-7);
    for (double v : alpha_small) CHECK(std::abs(v) <= 1e-7);
}

TEST_CASE("short-memory bound report") {
    const auto results = pacf_sweep(arma11(), 50, TruncationPolicy{});
    const auto pl = make_pipeline(arma11(), 50);
    const auto rep = check_short_memory_bound(arma11(), results, pl.ct, 50);
    CHECK(rep.all_satisfied);
    CHECK(rep.n_lo >= 1);
    CHECK(rep.rate_fit_valid);
    CHECK(std::abs(rep.fitted_alpha_rate / rep.fitted_a_rate - 1.0) <= 0.1);
    CHECK(rep.fitted_a_rate == doctest::Approx(0.4).epsilon(1e-3));

    // AR(1): zero PACF sits inside the bound trivially
    const auto res_ar = pacf_sweep(ar1(), 20, TruncationPolicy{});
    const auto pl_ar = make_pipeline(ar1(), 20);
    CHECK(check_short_memory_bound(ar1(), res_ar, pl_ar.ct, 20).all_satisfied);
}

TEST_CASE("long-memory asymptotics report") {
    std::vector<PacfResult> grid;
    const auto sweep = pacf_sweep(farima(0.3), 60, TruncationPolicy{});
    for (std::size_t n = 20; n <= 60; n += 4) grid.push_back(sweep[n - 1]);
    const auto rep = check_farima_asymptotics(farima(0.3), grid);
    CHECK(rep.max_remainder <= 1e-7); // exact model: remainder at noise level
    CHECK(rep.slope_pass);
    CHECK(rep.trend_pass);
}

TEST_CASE("deviation from the exact long-memory phase coefficients") {
    // same process: delta identically ~0
    const auto pl0 = make_pipeline(farima(0.3), 60);
    const auto rep0 = delta_comparison(farima(0.3), pl0.bt, 0.3, 60);
    CHECK(rep0.fitted_M <= 1e-6);

    // mixed model: n^d |delta_n| stays bounded
    const auto pl1 = make_pipeline(farima_ar(0.3), 120);
    const auto rep1 = delta_comparison(farima_ar(0.3), pl1.bt, 0.3, 120);
    CHECK(std::isfinite(rep1.fitted_M));
    CHECK(rep1.fitted_M < 10.0);
    CHECK(rep1.trend_pass);
}

TEST_CASE("assumption diagnostics") {
    const auto pl = make_pipeline(ar1(), 8);
    const auto rep = assumption_diagnostics(ar1(), pl.ct);
    CHECK_FALSE(rep.long_memory);
    CHECK(rep.certified);
    CHECK(rep.sum_abs_c == doctest::Approx(2.0).epsilon(1e-10));

    const double d = 0.3;
    const CoeffTable ct = coeff_table(farima(d), (1 << 16) + 8, 0);
    const auto rep2 = assumption_diagnostics(farima(d), ct);
    CHECK(rep2.long_memory);
    CHECK(rep2.converged);
    CHECK(std::abs(rep2.c_const / rep2.c_const_expected - 1.0) < 0.02);
    CHECK(std::abs(rep2.a_const / rep2.a_const_expected - 1.0) < 0.02);
    CHECK(rep2.c_const_expected ==
          doctest::Approx(1.0 / std::tgamma(d)).epsilon(1e-12));
}

TEST_CASE("identity suite on a short-memory spec") {
    const auto rep = check_identities(arma11(), TruncationPolicy{}, 10);
    CHECK(rep.conv_identity_max <= 1e-10);
    CHECK(rep.d_even_diff_max <= 1e-12);
    CHECK(rep.b_odd_diff_max <= 1e-12);
    CHECK(rep.b_even_diff_max <= 1e-12);
    CHECK(rep.szego_max <= 1e-10);
    CHECK(rep.pass());
}

TEST_CASE("verification bundle on AR(1)") {
    bool all_pass = false;
    const auto j = verify_bundle(ar1(), TruncationPolicy{}, 12, all_pass);
    CHECK(all_pass);
    CHECK(j.at("all_pass").get<bool>());
    CHECK(j.at("checks").is_array());
    for (const auto& c : j.at("checks")) {
        CHECK(c.contains("name"));
        CHECK(c.at("pass").get<bool>());
    }
}
