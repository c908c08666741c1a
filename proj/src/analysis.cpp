#include "verblunsky/analysis.hpp"
#include "verblunsky/phase.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace verblunsky {

RealSeq tau(std::size_t k_max) {
    if (k_max < 1) throw std::invalid_argument("tau: k_max >= 1");
    return gamma_ratio_seq(1.0 / std::numbers::pi,
                           [](std::size_t i) {
                               const double k = double(i + 1);
                               return (2.0 * k - 1.0) * (2.0 * k - 1.0) /
                                      (2.0 * k * (2.0 * k + 1.0));
                           },
                           k_max);
}

std::pair<RealSeq, RealSeq> exact_farima_refs(double d, std::size_t n_max) {
    if (!(d > 0.0 && d < 0.5))
        throw std::invalid_argument("exact_farima_refs: d in (0, 1/2) required");
    RealSeq beta_exact(n_max + 1), alpha_exact(n_max);
    const double s = std::sin(std::numbers::pi * d);
    for (std::size_t n = 0; n <= n_max; ++n)
        beta_exact[n] = s / (std::numbers::pi * (double(n) - d));
    for (std::size_t n = 1; n <= n_max; ++n) alpha_exact[n - 1] = d / (double(n) - d);
    return {std::move(beta_exact), std::move(alpha_exact)};
}

namespace {

// least-squares slope of y against x
double ls_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = std::min(x.size(), y.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

} // namespace

BoundReport check_short_memory_bound(const ModelSpec& spec,
                                     std::span<const PacfResult> alphas,
                                     const CoeffTable& ct, std::size_t n_hi) {
    if (spec.d != 0.0)
        throw std::invalid_argument("check_short_memory_bound: short-memory specs only");
    BoundReport rep;
    const RealSeq F = envelope_F(ct, n_hi + 2);

    std::size_t N = 0;
    for (std::size_t n = 1; n + 1 < F.size(); ++n)
        if (F[n + 1] < 1.0) {
            N = n;
            break;
        }
    if (N == 0)
        throw std::runtime_error("check_short_memory_bound: no n with F(n+1) < 1 in range");
    rep.n_lo = N;
    rep.n_hi = n_hi;

    double sum_c = 0.0;
    for (double x : ct.c) sum_c += std::abs(x);
    if (ct.c_geo_rate > 0.0)
        sum_c += std::abs(ct.c.back()) * ct.c_geo_rate / (1.0 - ct.c_geo_rate);

    // suffix maxima of |a| with the certified geometric tail as seed
    RealSeq amax(ct.a.size() + 1, 0.0);
    amax[ct.a.size()] = ct.a_geo_rate > 0.0
                            ? std::abs(ct.a.back()) * ct.a_geo_rate
                            : 0.0;
    for (std::size_t u = ct.a.size(); u-- > 0;)
        amax[u] = std::max(std::abs(ct.a[u]), amax[u + 1]);

    double worst = 0.0;
    std::vector<double> log_alpha, log_n_lin, log_a;
    for (const auto& r : alphas) {
        if (r.n < N || r.n > n_hi) continue;
        const double lhs = std::abs(r.alpha);
        const double rhs = sum_c / (1.0 - F[r.n + 1] * F[r.n + 1]) * amax[r.n];
        rep.n.push_back(r.n);
        rep.lhs.push_back(lhs);
        rep.rhs.push_back(rhs);
        rep.margin.push_back(rhs - lhs);
        worst = std::min(worst, rhs - lhs);
        if (lhs > 1e-280 && std::abs(ct.a[r.n]) > 1e-280) {
            log_n_lin.push_back(double(r.n));
            log_alpha.push_back(std::log(lhs));
            log_a.push_back(std::log(std::abs(ct.a[r.n])));
        }
    }
    rep.all_satisfied = worst >= -1e-12 && !rep.n.empty();
    if (log_alpha.size() >= 4) {
        rep.fitted_alpha_rate = std::exp(ls_slope(log_n_lin, log_alpha));
        rep.fitted_a_rate = std::exp(ls_slope(log_n_lin, log_a));
        rep.rate_fit_valid = true;
    }
    return rep;
}

AsymptoticsReport check_farima_asymptotics(const ModelSpec& spec,
                                           std::span<const PacfResult> alphas) {
    const double d = spec.d;
    if (!(d > 0.0 && d < 0.5))
        throw std::invalid_argument("check_farima_asymptotics: d in (0, 1/2) required");
    AsymptoticsReport rep;
    rep.d = d;
    rep.slope_threshold = -(1.0 + d) + 0.15;

    std::vector<double> lx, ly;
    for (const auto& r : alphas) {
        const double n = double(r.n);
        const double wres = std::pow(n, d) * std::abs(n * r.alpha - d);
        const double rem = std::abs(r.alpha - d / (n - d));
        rep.n_grid.push_back(r.n);
        rep.weighted_residual.push_back(wres);
        rep.remainder.push_back(rem);
        rep.max_remainder = std::max(rep.max_remainder, rem);
        if (rem > 0.0) {
            lx.push_back(std::log(n));
            ly.push_back(std::log(rem));
        }
    }
    if (lx.size() >= 4) rep.fitted_slope = ls_slope(lx, ly);
    rep.slope_pass = (lx.size() >= 4 && rep.fitted_slope <= rep.slope_threshold) ||
                     rep.max_remainder <= 1e-7;

    const std::size_t q = rep.weighted_residual.size() / 5;
    if (q >= 1) {
        double first = 0.0, last = 0.0;
        for (std::size_t i = 0; i < q; ++i) first += rep.weighted_residual[i];
        for (std::size_t i = rep.weighted_residual.size() - q;
             i < rep.weighted_residual.size(); ++i)
            last += rep.weighted_residual[i];
        rep.trend_pass = last <= first + 1e-12;
    }
    return rep;
}

DeltaReport delta_comparison(const ModelSpec& spec, const BetaTable& bt, double d,
                             std::size_t n_max) {
    if (!(d > 0.0 && d < 0.5))
        throw std::invalid_argument("delta_comparison: d in (0, 1/2) required");
    if (spec.d != d)
        throw std::invalid_argument("delta_comparison: spec.d and d disagree");
    if (bt.beta.size() <= n_max)
        throw std::invalid_argument("delta_comparison: beta table too short");
    DeltaReport rep;
    const double s = std::sin(std::numbers::pi * d);
    for (std::size_t n = 1; n <= n_max; ++n) {
        const double bp = s / (std::numbers::pi * (double(n) - d));
        const double delta = bt.beta[n] / bp - 1.0;
        rep.n.push_back(n);
        rep.delta.push_back(delta);
        rep.fitted_M = std::max(rep.fitted_M, std::pow(double(n), d) * std::abs(delta));
    }
    // no increasing trend of n^d |delta_n| over the second half of the range
    const std::size_t q = rep.n.size() / 5;
    if (q >= 1) {
        double first = 0.0, last = 0.0;
        for (std::size_t i = 0; i < q; ++i)
            first += std::pow(double(rep.n[i]), d) * std::abs(rep.delta[i]);
        for (std::size_t i = rep.n.size() - q; i < rep.n.size(); ++i)
            last += std::pow(double(rep.n[i]), d) * std::abs(rep.delta[i]);
        rep.trend_pass = last <= 1.2 * first + 1e-12;
    }
    return rep;
}

AssumptionReport assumption_diagnostics(const ModelSpec& spec, const CoeffTable& ct) {
    AssumptionReport rep;
    rep.long_memory = spec.d > 0.0;
    if (!rep.long_memory) {
        double sc = 0.0, sa = 0.0;
        for (double x : ct.c) sc += std::abs(x);
        for (double x : ct.a) sa += std::abs(x);
        bool certified = true;
        if (ct.c_geo_rate > 0.0)
            sc += std::abs(ct.c.back()) * ct.c_geo_rate / (1.0 - ct.c_geo_rate);
        if (ct.a_geo_rate > 0.0)
            sa += std::abs(ct.a.back()) * ct.a_geo_rate / (1.0 - ct.a_geo_rate);
        rep.sum_abs_c = sc;
        rep.sum_abs_a = sa;
        rep.certified = certified;
        return rep;
    }
    const double d = spec.d;
    const std::size_t L = ct.c.size();
    if (L < 1024)
        throw std::invalid_argument("assumption_diagnostics: coefficient table too short");
    const double s = std::sin(std::numbers::pi * d);
    auto window_mean = [&](const RealSeq& x, double expo, std::size_t lo, std::size_t hi) {
        double m = 0.0;
        for (std::size_t n = lo; n < hi; ++n) m += x[n] * std::pow(double(n), expo);
        return m / double(hi - lo);
    };
    const std::size_t hi = L - 1, mid = L / 2, lo = L / 4;
    const double c2 = window_mean(ct.c, 1.0 - d, mid, hi);
    const double c1 = window_mean(ct.c, 1.0 - d, lo, mid);
    const double a2 = window_mean(ct.a, 1.0 + d, mid, hi) * std::numbers::pi / (d * s);
    const double a1 = window_mean(ct.a, 1.0 + d, lo, mid) * std::numbers::pi / (d * s);
    rep.c_const = c2;
    rep.a_const = a2;
    rep.c_ratio_err = std::abs(c2 / c1 - 1.0);
    rep.a_ratio_err = std::abs(a2 / a1 - 1.0);
    const double k1 = poly_eval(spec.theta_poly(), 1.0) / poly_eval(spec.phi_poly(), 1.0);
    rep.c_const_expected = k1 / std::tgamma(d);
    rep.a_const_expected = std::tgamma(d) / k1;
    rep.converged = rep.c_ratio_err < 0.01 && rep.a_ratio_err < 0.01;
    return rep;
}

IdentityReport check_identities(const ModelSpec& spec, const TruncationPolicy& policy,
                                std::size_t szego_n_max) {
    require_valid(spec);
    IdentityReport rep;

    // convolution identity sum_k a_k c_{n-k} = -delta_{n0}, n <= 200
    {
        const CoeffTable small = coeff_table(spec, 256, 0);
        for (std::size_t n = 0; n <= 200; ++n) {
            double s = 0.0;
            for (std::size_t k = 0; k <= n; ++k) s += small.a[k] * small.c[n - k];
            const double target = n == 0 ? -1.0 : 0.0;
            rep.conv_identity_max = std::max(rep.conv_identity_max, std::abs(s - target));
        }
    }

    const std::size_t n_hi = 10;
    const std::size_t W = spec.d > 0.0 ? std::max<std::size_t>(policy.head, 64) : policy.V;
    const std::size_t n_beta = std::max(szego_n_max, n_hi + 2) + 2 * W + 2;
    const std::size_t inner = policy.beta_inner_for(spec.d);
    const CoeffTable ct = coeff_table(spec, inner + n_beta + 2, szego_n_max + 2);
    const BetaTable bt = beta(spec, ct, n_beta, policy);
    const PacfEngine eng(spec, &ct, bt, policy);

    // even-step difference recursion (k in {1,2,3}, (n,j) in [2,10]^2)
    for (std::size_t k = 1; k <= 3; ++k) {
        for (std::size_t n = 2; n <= n_hi; ++n) {
            const RealSeq d2k_n = eng.dk_head(n, 2 * k);
            const RealSeq d2k_n1 = eng.dk_head(n + 1, 2 * k);
            std::vector<RealSeq> dodd(k);
            RealSeq aterm(k);
            for (std::size_t l = 1; l <= k; ++l) {
                dodd[l - 1] = eng.dk_head(n, 2 * l - 1);
                aterm[l - 1] = eng.alpha_term_value(n, k - l);
            }
            for (std::size_t j = 2; j <= n_hi; ++j) {
                double rhs = 0.0;
                for (std::size_t l = 1; l <= k; ++l) rhs += aterm[l - 1] * dodd[l - 1][j];
                const double r = d2k_n[j] - d2k_n1[j] - rhs;
                rep.d_even_diff_max = std::max(rep.d_even_diff_max, std::abs(r));
            }
        }
    }

    // b-coefficient difference recursions (k in {1,2,3}, j in [1, n], n in [2,10])
    for (std::size_t k = 1; k <= 3; ++k) {
        for (std::size_t n = 2; n <= n_hi; ++n) {
            const RealSeq b_odd_n = eng.b_row(n, 2 * k + 1, n + 2);
            const RealSeq b_odd_n1 = eng.b_row(n + 1, 2 * k + 1, n + 2);
            const RealSeq b_even_n = eng.b_row(n, 2 * k, n + 2);
            const RealSeq b_even_n1 = eng.b_row(n + 1, 2 * k, n + 2);
            std::vector<RealSeq> b_low(2 * k);
            for (std::size_t l = 1; l <= 2 * k; ++l) b_low[l - 1] = eng.b_row(n, l, n + 2);
            RealSeq aterm(k);
            for (std::size_t l = 1; l <= k; ++l)
                aterm[l - 1] = eng.alpha_term_value(n + 1, k - l);
            for (std::size_t j = 1; j <= n; ++j) {
                double rhs_a = 0.0, rhs_b = 0.0;
                for (std::size_t l = 1; l <= k; ++l) {
                    rhs_a += aterm[l - 1] * b_low[2 * l - 1][j - 1];          // b_{2l}(n, j)
                    rhs_b += aterm[l - 1] * b_low[2 * l - 2][n + 1 - j - 1];  // b_{2l-1}(n, n+1-j)
                }
                const double ra = b_odd_n[j - 1] - b_odd_n1[j - 1] - rhs_a;
                const double rb =
                    b_even_n[n + 1 - j - 1] - b_even_n1[n + 2 - j - 1] - rhs_b;
                rep.b_odd_diff_max = std::max(rep.b_odd_diff_max, std::abs(ra));
                rep.b_even_diff_max = std::max(rep.b_even_diff_max, std::abs(rb));
            }
        }
    }

    // predictor-table recursion residual against the series alpha
    {
        const PredictorTable pt = eng.predictors(szego_n_max);
        RealSeq al(szego_n_max, 0.0);
        al[0] = levinson(ct.gamma, 1).alpha[0];
        for (std::size_t n = 2; n <= szego_n_max; ++n) al[n - 1] = eng.alpha(n).alpha;
        rep.szego_max = szego_residual_max(pt, al);
    }
    return rep;
}

namespace {

nlohmann::json spec_json(const ModelSpec& spec) {
    return {{"phi", spec.ar}, {"theta", spec.ma}, {"d", spec.d}};
}

} // namespace

nlohmann::json verify_bundle(const ModelSpec& spec, const TruncationPolicy& policy,
                             std::size_t n_max, bool& all_pass) {
    require_valid(spec);
    nlohmann::json checks = nlohmann::json::array();
    all_pass = true;
    auto add = [&](nlohmann::json j) {
        all_pass = all_pass && j.at("pass").get<bool>();
        checks.push_back(std::move(j));
    };

    const auto rep = validate(spec);
    add({{"name", "model_validation"}, {"pass", rep.ok()}, {"detail", rep.describe()}});

    // oracle equivalence
    const auto results = pacf_sweep(spec, n_max, policy);
    const RealSeq gamma = autocovariance(spec, n_max + 2);
    const auto lev = levinson(gamma, n_max);
    double max_diff = 0.0;
    nlohmann::json alpha_rows = nlohmann::json::array();
    for (std::size_t n = 2; n <= n_max; ++n) {
        const double diff = std::abs(results[n - 1].alpha - lev.alpha[n - 1]);
        max_diff = std::max(max_diff, diff);
        alpha_rows.push_back({{"n", n},
                              {"alpha_series", results[n - 1].alpha},
                              {"alpha_levinson", lev.alpha[n - 1]},
                              {"diff", diff},
                              {"est_trunc_error", results[n - 1].est_trunc_error}});
    }
    const double oracle_tol = spec.d > 0.0 ? 1e-6 : 1e-9;
    bool conv_ok = true;
    for (const auto& r : results)
        if (r.n >= 2) conv_ok = conv_ok && r.converged;
    add({{"name", "oracle_equivalence"},
         {"pass", max_diff <= oracle_tol && conv_ok},
         {"max_abs_diff", max_diff},
         {"tolerance", oracle_tol},
         {"all_converged", conv_ok},
         {"rows", alpha_rows}});

    // identity suite
    const IdentityReport idr = check_identities(spec, policy, std::min<std::size_t>(n_max, 12));
    add({{"name", "identity_suite"},
         {"pass", idr.pass()},
         {"convolution_max", idr.conv_identity_max},
         {"even_difference_max", idr.d_even_diff_max},
         {"b_difference_odd_max", idr.b_odd_diff_max},
         {"b_difference_even_max", idr.b_even_diff_max},
         {"predictor_recursion_max", idr.szego_max}});

    // tau / arcsin partial sum
    {
        const RealSeq t = tau(60);
        double s = 0.0;
        for (std::size_t k = 1; k <= 60; ++k)
            s += t[k - 1] * std::pow(0.5, double(2 * k - 1));
        const double err = std::abs(s - 1.0 / 6.0);
        add({{"name", "arcsin_coefficients"}, {"pass", err <= 1e-12}, {"abs_error", err}});
    }

    const std::size_t W = spec.d > 0.0 ? std::max<std::size_t>(policy.head, 64) : policy.V;
    const std::size_t inner = policy.beta_inner_for(spec.d);

    if (spec.d == 0.0) {
        const CoeffTable ct = coeff_table(spec, inner + n_max + 2 * W + 4, n_max + 2);
        const auto ar = assumption_diagnostics(spec, ct);
        add({{"name", "summability"},
             {"pass", ar.certified},
             {"sum_abs_c", ar.sum_abs_c},
             {"sum_abs_a", ar.sum_abs_a}});

        const auto br = check_short_memory_bound(spec, results, ct, n_max);
        nlohmann::json j = {{"name", "short_memory_bound"},
                            {"pass", br.all_satisfied},
                            {"n_lo", br.n_lo},
                            {"n_hi", br.n_hi},
                            {"min_margin",
                             br.margin.empty()
                                 ? 0.0
                                 : *std::min_element(br.margin.begin(), br.margin.end())}};
        if (br.rate_fit_valid) {
            const bool rate_ok =
                std::abs(br.fitted_alpha_rate / br.fitted_a_rate - 1.0) <= 0.1;
            j["fitted_alpha_rate"] = br.fitted_alpha_rate;
            j["fitted_a_rate"] = br.fitted_a_rate;
            j["pass"] = br.all_satisfied && rate_ok;
        }
        add(std::move(j));

        // state-sum envelope: sum_u |d_k(n,u)| <= F(n)^k at the three smallest
        // n with F(n) < 1, k <= 4
        {
            const std::size_t nb = n_max + 2 * policy.V + 2;
            const CoeffTable ct2 = coeff_table(spec, inner + nb + 2, 0);
            const BetaTable bt2 = beta(spec, ct2, nb, policy);
            const RealSeq F = envelope_F(ct, n_max + 2);
            std::size_t n0 = 0;
            for (std::size_t n = 1; n + 1 < F.size(); ++n)
                if (F[n] < 1.0) {
                    n0 = n;
                    break;
                }
            bool ok = n0 > 0;
            double worst = 0.0;
            for (std::size_t n = n0; ok && n < n0 + 3; ++n) {
                for (std::size_t k = 1; k <= 4; ++k) {
                    const RealSeq dk = dk_vector(bt2, n, k, policy);
                    double s = 0.0;
                    for (double x : dk) s += std::abs(x);
                    const double bound = std::pow(F[n], double(k));
                    worst = std::max(worst, s - bound);
                    ok = ok && s <= bound + 1e-10;
                }
            }
            add({{"name", "state_sum_envelope"},
                 {"pass", ok},
                 {"max_excess", worst},
                 {"first_n", n0}});
        }
    } else {
        const CoeffTable ct = coeff_table(spec, std::max<std::size_t>(inner, 1 << 16) + 8, 0);
        const auto ar = assumption_diagnostics(spec, ct);
        add({{"name", "power_law_coefficients"},
             {"pass", ar.converged},
             {"c_const", ar.c_const},
             {"c_const_expected", ar.c_const_expected},
             {"a_const", ar.a_const},
             {"a_const_expected", ar.a_const_expected},
             {"c_ratio_err", ar.c_ratio_err},
             {"a_ratio_err", ar.a_ratio_err}});

        // asymptotics on a log grid up to max(60, 2 n_max)
        {
            const std::size_t hi = std::max<std::size_t>(60, 2 * n_max);
            std::vector<std::size_t> grid;
            for (double x = 20.0; x <= double(hi) * 1.0001; x *= 1.18)
                grid.push_back(std::size_t(std::lround(x)));
            grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
            std::vector<PacfResult> al;
            {
                const auto sweep = pacf_sweep(spec, hi, policy);
                for (std::size_t n : grid) al.push_back(sweep[n - 1]);
            }
            const auto as = check_farima_asymptotics(spec, al);
            add({{"name", "long_memory_asymptotics"},
                 {"pass", as.slope_pass && as.trend_pass},
                 {"fitted_slope", as.fitted_slope},
                 {"slope_threshold", as.slope_threshold},
                 {"max_remainder", as.max_remainder},
                 {"trend_pass", as.trend_pass}});
        }

        // deviation from the exact FARIMA(0,d,0) phase coefficients
        {
            const std::size_t nb = std::max<std::size_t>(n_max, 50) + 2 * W + 2;
            const CoeffTable ctb = coeff_table(spec, inner + nb + 2, 0);
            const BetaTable bt = beta(spec, ctb, nb, policy);
            const auto dr = delta_comparison(spec, bt, spec.d, std::max<std::size_t>(n_max, 50));
            add({{"name", "phase_coefficient_deviation"},
                 {"pass", dr.trend_pass && std::isfinite(dr.fitted_M)},
                 {"fitted_M", dr.fitted_M}});

            if (spec.p() == 0 && spec.q() == 0) {
                const auto [be, ae] = exact_farima_refs(spec.d, n_max);
                double worst = 0.0;
                for (std::size_t n = 0; n <= n_max; ++n)
                    worst = std::max(worst, std::abs(bt.beta[n] - be[n]) /
                                                std::max(1e-300, bt.est_error[n]));
                double worst_alpha = 0.0;
                for (std::size_t n = 2; n <= n_max; ++n)
                    worst_alpha = std::max(worst_alpha,
                                           std::abs(results[n - 1].alpha - ae[n - 1]));
                add({{"name", "exact_references"},
                     {"pass", worst <= 1.0 && worst_alpha <= 1e-6},
                     {"beta_err_over_est", worst},
                     {"alpha_max_abs_err", worst_alpha}});
            }
        }
    }

    nlohmann::json out;
    out["spec"] = spec_json(spec);
    out["n_max"] = n_max;
    out["checks"] = std::move(checks);
    out["all_pass"] = all_pass;
    return out;
}

} // namespace verblunsky
