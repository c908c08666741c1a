// Acceptance suite: one check per criterion, each printing a PASS/FAIL line.
// Run all with no arguments or a single one with --criterion N.

#include "verblunsky/analysis.hpp"
#include "verblunsky/engine.hpp"
#include "verblunsky/oracle.hpp"
#include "verblunsky/phase.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

using namespace verblunsky;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

struct Tables {
    ModelSpec spec;
    CoeffTable ct;
    BetaTable bt;
};

Tables tables_for(const ModelSpec& spec, std::size_t n_max, const TruncationPolicy& pol) {
    const std::size_t W = spec.d > 0.0 ? std::max<std::size_t>(pol.head, 64) : pol.V;
    const std::size_t n_beta = n_max + 2 * W + 2;
    const std::size_t inner = pol.beta_inner_for(spec.d);
    CoeffTable ct = coeff_table(spec, inner + n_beta + 2, n_max + 2);
    BetaTable bt = beta(spec, ct, n_beta, pol);
    return {spec, std::move(ct), std::move(bt)};
}

// 1. exact FARIMA(0,d,0) PACF at the default policy, n = 2..100, within 1e-6
void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (double d : {0.1, 0.25, 0.4}) {
        const auto res = pacf_sweep(ModelSpec{{}, {}, d}, 100, TruncationPolicy{});
        for (std::size_t n = 2; n <= 100; ++n)
            worst = std::max(worst, std::abs(res[n - 1].alpha - d / (double(n) - d)));
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0).count();
    report(1, worst <= 1e-6 && secs < 60.0, "exact FARIMA(0,d,0) PACF, d in {0.1,0.25,0.4}",
           "max |alpha - d/(n-d)| = " + fmt(worst) + ", " + fmt(secs) + " s");
}

// 2. phase coefficients against the closed form, n = 0..100
void criterion2() {
    double worst_excess = 0.0, worst_abs = 0.0;
    for (double d : {0.1, 0.25, 0.4}) {
        const BetaTable bt = beta(ModelSpec{{}, {}, d}, 100, TruncationPolicy{});
        const double s = std::sin(std::numbers::pi * d);
        for (std::size_t n = 0; n <= 100; ++n) {
            const double exact = s / (std::numbers::pi * (double(n) - d));
            const double err = std::abs(bt.beta[n] - exact);
            const double allowed = std::max(1e-6, bt.est_error[n]);
            worst_excess = std::max(worst_excess, err - allowed);
            worst_abs = std::max(worst_abs, err);
        }
    }
    report(2, worst_excess <= 0.0, "phase coefficients vs sin(pi d)/(pi (n-d))",
           "max err = " + fmt(worst_abs) + ", max err-allowance = " + fmt(worst_excess));
}

// 3. oracle equivalence for mixed models
void criterion3() {
    double worst_lm = 0.0;
    for (double d : {0.1, 0.3}) {
        const ModelSpec spec{{0.5}, {0.4}, d};
        const auto res = pacf_sweep(spec, 50, TruncationPolicy{});
        const auto lev = levinson(autocovariance(spec, 52), 50);
        for (std::size_t n = 2; n <= 50; ++n)
            worst_lm = std::max(worst_lm, std::abs(res[n - 1].alpha - lev.alpha[n - 1]));
    }
    const ModelSpec arma{{0.5}, {0.4}, 0.0};
    const auto res = pacf_sweep(arma, 50, TruncationPolicy{});
    const auto lev = levinson(autocovariance(arma, 52), 50);
    double worst_sm = 0.0;
    for (std::size_t n = 2; n <= 50; ++n)
        worst_sm = std::max(worst_sm, std::abs(res[n - 1].alpha - lev.alpha[n - 1]));
    report(3, worst_lm <= 1e-6 && worst_sm <= 1e-9, "series vs Levinson on FARIMA(1,d,1)",
           "long memory max = " + fmt(worst_lm) + ", ARMA max = " + fmt(worst_sm));
}

// 4. term-level oracle: literal nested sums vs the state recursion
void criterion4() {
    const ModelSpec spec{{}, {}, 0.25};
    bool ok = true;
    std::string detail;

    TruncationPolicy pol2000;
    pol2000.V = 2000;
    const Tables tb = tables_for(spec, 12 + 2 * pol2000.V, pol2000);

    for (std::size_t n : {std::size_t{2}, std::size_t{5}, std::size_t{10}}) {
        // k = 3 at the full V = 2000
        const double lit3 = brute_alpha_term(tb.bt, n, 3, 2000);
        const double rec3 = alpha_term(tb.bt, n, 1, pol2000);
        ok = ok && std::abs(lit3 - rec3) <= 1e-12 * std::max(1.0, std::abs(lit3));

        // k = 5 at matched V = 192, plus truncation-estimate agreement with V = 2000
        TruncationPolicy pol192;
        pol192.V = 192;
        const double lit5 = brute_alpha_term(tb.bt, n, 5, 192);
        const double rec5_192 = alpha_term(tb.bt, n, 2, pol192);
        ok = ok && std::abs(lit5 - rec5_192) <= 1e-12 * std::max(1.0, std::abs(lit5));

        TruncationPolicy pol96, pol1000;
        pol96.V = 96;
        pol1000.V = 1000;
        const double rec5_2000 = alpha_term(tb.bt, n, 2, pol2000);
        const double est192 = std::abs(rec5_192 - alpha_term(tb.bt, n, 2, pol96));
        const double est2000 = std::abs(rec5_2000 - alpha_term(tb.bt, n, 2, pol1000));
        const double gap = std::abs(lit5 - rec5_2000);
        ok = ok && gap <= 3.0 * (est192 + est2000);
        if (n == 2)
            detail = "k=5 n=2: |literal - V2000 recursion| = " + fmt(gap) +
                     " vs combined estimate " + fmt(3.0 * (est192 + est2000));
    }
    report(4, ok, "brute-force nested sums vs the d_k recursion", detail);
}

// 5. identity suite on both model families
void criterion5() {
    const IdentityReport arma = check_identities(ModelSpec{{0.5}, {0.4}, 0.0},
                                                 TruncationPolicy{}, 30);
    const IdentityReport lm = check_identities(ModelSpec{{}, {}, 0.25},
                                               TruncationPolicy{}, 30);
    const bool ok = arma.pass() && lm.pass();
    report(5, ok, "convolution + difference identities + predictor recursion",
           "ARMA szego = " + fmt(arma.szego_max) + ", long-memory szego = " +
               fmt(lm.szego_max) + ", worst difference residual = " +
               fmt(std::max({arma.d_even_diff_max, arma.b_odd_diff_max, arma.b_even_diff_max,
                             lm.d_even_diff_max, lm.b_odd_diff_max, lm.b_even_diff_max})));
}

// 6. short-memory bound and geometric decay rate
void criterion6() {
    const ModelSpec spec{{0.5}, {0.4}, 0.0};
    const auto res = pacf_sweep(spec, 50, TruncationPolicy{});
    const Tables tb = tables_for(spec, 52, TruncationPolicy{});
    const auto rep = check_short_memory_bound(spec, res, tb.ct, 50);
    const bool rate_ok =
        rep.rate_fit_valid && std::abs(rep.fitted_alpha_rate / rep.fitted_a_rate - 1.0) <= 0.1;
    report(6, rep.all_satisfied && rate_ok, "short-memory bound on ARMA(1,1)",
           "N = " + std::to_string(rep.n_lo) + ", alpha rate " + fmt(rep.fitted_alpha_rate) +
               " vs a rate " + fmt(rep.fitted_a_rate));
}

// 7. long-memory asymptotics for FARIMA(1,0.3,0) over [20, 200]
void criterion7() {
    const ModelSpec spec{{0.5}, {}, 0.3};
    const auto sweep = pacf_sweep(spec, 200, TruncationPolicy{});
    std::vector<PacfResult> grid;
    for (double x = 20.0; x <= 200.0 * 1.0001; x *= 1.12) {
        const std::size_t n = std::size_t(std::lround(x));
        if (grid.empty() || grid.back().n != n) grid.push_back(sweep[n - 1]);
    }
    const auto rep = check_farima_asymptotics(spec, grid);
    report(7, rep.slope_pass && rep.trend_pass, "n alpha(n) -> d with controlled remainder",
           "remainder slope = " + fmt(rep.fitted_slope) + " (threshold " +
               fmt(rep.slope_threshold) + "), weighted residual trend " +
               (rep.trend_pass ? "non-increasing" : "increasing"));
}

// 8. state-sum envelope, k <= 4, three smallest n with F(n) < 1
void criterion8() {
    const ModelSpec spec{{0.5}, {0.4}, 0.0};
    TruncationPolicy pol;
    const Tables tb = tables_for(spec, 20 + 2 * pol.V, pol);
    const RealSeq F = envelope_F(tb.ct, 24);
    std::size_t n0 = 0;
    for (std::size_t n = 1; n + 1 < F.size(); ++n)
        if (F[n] < 1.0) {
            n0 = n;
            break;
        }
    bool ok = n0 > 0;
    double worst = -1.0;
    for (std::size_t n = n0; ok && n < n0 + 3; ++n) {
        for (std::size_t k = 1; k <= 4; ++k) {
            const RealSeq dk = dk_vector(tb.bt, n, k, pol);
            double s = 0.0;
            for (double x : dk) s += std::abs(x);
            const double excess = s - std::pow(F[n], double(k));
            worst = std::max(worst, excess);
            ok = ok && excess <= 1e-10;
        }
    }
    report(8, ok, "sum_u |d_k(n,u)| <= F(n)^k on ARMA(1,1)",
           "first n = " + std::to_string(n0) + ", max excess = " + fmt(worst));
}

// 9. arcsin coefficient identity at x = 1/2
void criterion9() {
    const RealSeq t = tau(60);
    double s = 0.0;
    for (std::size_t k = 1; k <= 60; ++k) s += t[k - 1] * std::pow(0.5, double(2 * k - 1));
    const double err = std::abs(s - 1.0 / 6.0);
    report(9, err <= 1e-12, "arcsin coefficient partial sum at 1/2", "error = " + fmt(err));
}

// 10. FFT correlation: accuracy and speed; full pacf run under a minute
void criterion10() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const std::size_t V = std::size_t{1} << 16;
    RealSeq b(3 * V), x(V);
    for (double& v : b) v = uni(rng);
    for (double& v : x) v = uni(rng);
    const auto t0 = std::chrono::steady_clock::now();
    const RealSeq yn = correlate_tail(b, x, 0, V, CorrelateMode::naive);
    const auto t1 = std::chrono::steady_clock::now();
    RealSeq yf;
    for (int r = 0; r < 3; ++r) yf = correlate_tail(b, x, 0, V, CorrelateMode::fft);
    const auto t2 = std::chrono::steady_clock::now();
    double scale = 0.0, diff = 0.0;
    for (double v : yn) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < V; ++i) diff = std::max(diff, std::abs(yn[i] - yf[i]));
    const double naive_s = std::chrono::duration<double>(t1 - t0).count();
    const double fft_s = std::chrono::duration<double>(t2 - t1).count() / 3.0;
    const double speedup = naive_s / fft_s;

    const auto t3 = std::chrono::steady_clock::now();
    pacf_sweep(ModelSpec{{}, {}, 0.3}, 100, TruncationPolicy{});
    const double sweep_s = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - t3).count();

    report(10, diff <= 1e-12 * scale && speedup >= 5.0 && sweep_s < 60.0,
           "FFT correlation accuracy/speed and full pacf runtime",
           "rel diff = " + fmt(diff / scale) + ", speedup = " + fmt(speedup) +
               "x, pacf n<=100 in " + fmt(sweep_s) + " s");
}

// 11. doubling V moves every alpha by less than 10x its error estimate
void criterion11() {
    bool ok = true;
    double worst_ratio = 0.0;
    for (const ModelSpec& spec :
         {ModelSpec{{0.5}, {0.4}, 0.0}, ModelSpec{{}, {}, 0.25}, ModelSpec{{0.5}, {0.4}, 0.3},
          ModelSpec{{}, {0.4}, 0.4}}) {
        TruncationPolicy p1, p2;
        p2.V = 2 * p1.V;
        const auto r1 = pacf_sweep(spec, 50, p1);
        const auto r2 = pacf_sweep(spec, 50, p2);
        for (std::size_t n : {std::size_t{2}, std::size_t{5}, std::size_t{10},
                              std::size_t{25}, std::size_t{50}}) {
            const double move = std::abs(r1[n - 1].alpha - r2[n - 1].alpha);
            const double ratio = move / (10.0 * r1[n - 1].est_trunc_error);
            worst_ratio = std::max(worst_ratio, ratio);
            ok = ok && ratio < 1.0;
        }
    }
    report(11, ok, "error-estimate honesty under V doubling",
           "max |move| / (10 est) = " + fmt(worst_ratio));
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i + 1 < argc + 1; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            only = std::atoi(argv[i + 1]);
    }
    using Fn = void (*)();
    const Fn checks[] = {criterion1, criterion2, criterion3, criterion4,
                         criterion5, criterion6, criterion7, criterion8,
                         criterion9, criterion10, criterion11};
    for (int i = 0; i < 11; ++i) {
        if (only && only != i + 1) continue;
        checks[i]();
    }
    return failures == 0 ? 0 : 1;
}
