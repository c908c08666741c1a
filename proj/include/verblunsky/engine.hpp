#pragma once

#include "verblunsky/models.hpp"
#include "verblunsky/phase.hpp"
#include "verblunsky/policy.hpp"

#include <memory>
#include <mutex>

namespace verblunsky {

struct PacfResult {
    std::size_t n = 0;
    double alpha = 0.0;
    std::size_t terms_used = 0;
    double last_term = 0.0;
    double est_trunc_error = 0.0;
    bool converged = false;
};

/// Triangular finite-predictor table, rows[n-1][j-1] = phi_{n,j}.
struct PredictorTable {
    std::size_t n_max = 0;
    std::vector<RealSeq> rows;
    std::vector<char> row_converged;

    double at(std::size_t n, std::size_t j) const { return rows.at(n - 1).at(j - 1); }
};

/// Max recursion residual |phi_{n,j} - phi_{n+1,j} - phi_{n,n+1-j} alpha(n+1)|
/// over 1 <= j <= n < n_max; alpha_by_n[i] = alpha(i+1).
double szego_residual_max(const PredictorTable& pt, std::span<const double> alpha_by_n);

/// d_k(n, j) for 0 <= j < policy.V by k truncated Hankel correlations.
RealSeq dk_vector(const BetaTable& bt, std::size_t n, std::size_t k,
                  const TruncationPolicy& policy);

/// Odd series term alpha_{2k+1}(n) = sum_{v<V} beta_{n+v} d_{2k}(n+1, v);
/// alpha_term(bt, n, 0, pol) = beta_n.
double alpha_term(const BetaTable& bt, std::size_t n, std::size_t k,
                  const TruncationPolicy& policy);

/// b_k(n, j) = sum_{u<V} a_{j+u} d_{k-1}(n+1, u), j >= 1, k >= 1.
double b_coeff(const CoeffTable& ct, const BetaTable& bt, std::size_t n, std::size_t j,
               std::size_t k, const TruncationPolicy& policy);

/// Series evaluation of the n-th Verblunsky coefficient, n >= 2.
/// n = 1 is out of the series' scope; use oracle::levinson.
PacfResult alpha(const BetaTable& bt, std::size_t n, const TruncationPolicy& policy);

/// Fills phi_{n,j} for 1 <= j <= n <= n_max from the phase-coefficient series.
PredictorTable predictor_coeffs(const CoeffTable& ct, const BetaTable& bt,
                                std::size_t n_max, const TruncationPolicy& policy);

/// Full pipeline: model validation, coefficient/phase tables sized for
/// [1, n_max], series alpha for n >= 2 and the Levinson value at n = 1.
/// threads = 0 picks the hardware count.
std::vector<PacfResult> pacf_sweep(const ModelSpec& spec, std::size_t n_max,
                                   const TruncationPolicy& policy = {}, int threads = 0);

namespace detail {
struct TailBasis;
}

/// Reusable series engine. For short-memory models the state is a plain
/// length-V vector advanced by truncated Hankel correlations. For long-memory
/// models the state keeps an exact head of W = policy.head entries plus
/// coefficients in a quadrature basis that represents the power-law tail of
/// the phase coefficients exactly under the Hankel map (graded mesh on the
/// branch-cut integral representation of beta; depth scales with policy.V).
class PacfEngine {
public:
    PacfEngine(const ModelSpec& spec, const CoeffTable* ct, const BetaTable& bt,
               const TruncationPolicy& policy);
    ~PacfEngine();

    PacfResult alpha(std::size_t n) const;
    PredictorTable predictors(std::size_t n_max) const;

    /// High-accuracy d_k(n, j) for j < head_len (long-memory path when d > 0).
    RealSeq dk_head(std::size_t n, std::size_t k) const;
    /// High-accuracy alpha_{2k+1}(n).
    double alpha_term_value(std::size_t n, std::size_t k) const;
    /// High-accuracy b_k(n, j) row for j = 1..j_max.
    RealSeq b_row(std::size_t n, std::size_t k, std::size_t j_max) const;

    std::size_t head_len() const { return head_; }
    bool long_memory() const { return tail_ != nullptr; }

private:
    struct State;
    struct Ctx;

    PacfEngine(const ModelSpec& spec, const CoeffTable* ct, const BetaTable& bt,
               const TruncationPolicy& policy, int levels_override);

    void make_ctx(std::size_t base, Ctx& ctx) const;
    void apply(const Ctx& ctx, const State& x, State& y, const RealSeq& g) const;
    void tail_gemv(const State& x, RealSeq& g) const;
    double contract(std::size_t outer, const State& x, const RealSeq& g) const;
    RealSeq a_row(const State& x, const RealSeq& g, std::size_t j_max) const;
    PacfResult alpha_impl(std::size_t n) const;
    void calibration() const;

    ModelSpec spec_;
    const CoeffTable* ct_;
    const BetaTable* bt_;
    TruncationPolicy pol_;
    std::size_t head_;
    std::unique_ptr<detail::TailBasis> tail_;

    mutable std::once_flag cal_once_;
    mutable double cal_delta_ = 0.0;
    mutable double eps_window_ = 0.0;
};

} // namespace verblunsky
