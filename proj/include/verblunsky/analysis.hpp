#pragma once

#include "verblunsky/engine.hpp"
#include "verblunsky/oracle.hpp"

#include "json.hpp"

namespace verblunsky {

/// Taylor coefficients tau_{2k-1} of arcsin(x)/pi, k = 1..k_max, by ratio
/// recurrence (tau_1 = 1/pi, tau_{2k+1}/tau_{2k-1} = (2k-1)^2 / (2k (2k+1))).
RealSeq tau(std::size_t k_max);

/// Exact FARIMA(0,d,0) references: beta'[n] = sin(pi d)/(pi (n-d)) for
/// n = 0..n_max and alpha'[i] = d/(i+1-d) for i = 0..n_max-1.
std::pair<RealSeq, RealSeq> exact_farima_refs(double d, std::size_t n_max);

struct BoundReport {
    std::size_t n_lo = 0, n_hi = 0; // evaluated range (n_lo = first n with F(n+1) < 1)
    std::vector<std::size_t> n;
    RealSeq lhs, rhs, margin;
    bool all_satisfied = false;
    double fitted_alpha_rate = 0.0; // geometric decay of |alpha(n)|
    double fitted_a_rate = 0.0;     // geometric decay of |a_n|
    bool rate_fit_valid = false;
};

/// Short-memory bound |alpha(n)| <= (sum|c|) max_{j>=n}|a_j| / (1 - F(n+1)^2)
/// on [N, n_hi] where N is the first index with F(N+1) < 1.
BoundReport check_short_memory_bound(const ModelSpec& spec,
                                     std::span<const PacfResult> alphas,
                                     const CoeffTable& ct, std::size_t n_hi);

struct AsymptoticsReport {
    double d = 0.0;
    std::vector<std::size_t> n_grid;
    RealSeq weighted_residual;   // n^d |n alpha(n) - d|
    RealSeq remainder;           // |alpha(n) - d/(n-d)|
    double fitted_slope = 0.0;   // log-log slope of the remainder
    double slope_threshold = 0.0; // -(1+d) + 0.15
    double max_remainder = 0.0;
    bool slope_pass = false;     // slope below threshold, or remainder at noise level
    bool trend_pass = false;     // weighted residual shows no increasing trend
};

/// Long-memory asymptotics: n alpha(n) -> d with remainder alpha(n) - d/(n-d)
/// decaying like n^{-(1+d)}.
AsymptoticsReport check_farima_asymptotics(const ModelSpec& spec,
                                           std::span<const PacfResult> alphas);

struct DeltaReport {
    std::vector<std::size_t> n;
    RealSeq delta;          // beta_n / beta'_n - 1
    double fitted_M = 0.0;  // sup n^d |delta_n|
    bool trend_pass = false;
};

/// Relative deviation of the model's phase coefficients from the exact
/// FARIMA(0,d,0) ones; expected to satisfy |delta_n| <= M n^{-d}.
DeltaReport delta_comparison(const ModelSpec& spec, const BetaTable& bt, double d,
                             std::size_t n_max);

struct AssumptionReport {
    bool long_memory = false;
    // short memory: absolute-sum certificates
    double sum_abs_c = 0.0, sum_abs_a = 0.0;
    bool certified = false;
    // long memory: window-ratio convergence of the normalized coefficients
    double c_const = 0.0, a_const = 0.0;         // fitted limits
    double c_const_expected = 0.0, a_const_expected = 0.0;
    double c_ratio_err = 0.0, a_ratio_err = 0.0; // window-ratio deviations
    bool converged = false;
};

/// Diagnostics for the summability (d = 0) or power-law (d > 0) assumptions.
AssumptionReport assumption_diagnostics(const ModelSpec& spec, const CoeffTable& ct);

struct IdentityReport {
    double conv_identity_max = 0.0; // |sum_k a_k c_{n-k} + delta_{n0}|, n <= 200
    double d_even_diff_max = 0.0;        // even-step difference recursion residual
    double b_odd_diff_max = 0.0;       // odd-b difference residual
    double b_even_diff_max = 0.0;       // even-b difference residual
    double szego_max = 0.0;         // predictor-table recursion residual
    bool pass() const {
        return conv_identity_max <= 1e-10 && d_even_diff_max <= 1e-8 &&
               b_odd_diff_max <= 1e-8 && b_even_diff_max <= 1e-8 && szego_max <= 1e-7;
    }
};

/// Difference-equation identity residuals on the sample grid
/// (n, j) in [2,10]^2, k in {1,2,3}, plus the predictor-table recursion
/// residual for n <= szego_n_max.
IdentityReport check_identities(const ModelSpec& spec, const TruncationPolicy& policy,
                                std::size_t szego_n_max = 12);

/// Full verification bundle as one JSON object; all_pass mirrors the
/// conjunction of every check's pass flag.
nlohmann::json verify_bundle(const ModelSpec& spec, const TruncationPolicy& policy,
                             std::size_t n_max, bool& all_pass);

} // namespace verblunsky
