#pragma once

#include "verblunsky/models.hpp"
#include "verblunsky/policy.hpp"

namespace verblunsky {

/// Phase coefficients beta_n = sum_v c_v a_{v+n} with per-entry truncation
/// error estimates. For long-memory models the raw inner sum is corrected by
/// the integral of a power-law fit to the last summand window; est_error
/// bounds the residual of that correction.
struct BetaTable {
    RealSeq beta;
    RealSeq est_error;
    std::size_t trunc_v = 0;
    bool tail_corrected = false;
    ModelSpec spec;

    std::size_t size() const { return beta.size(); }
};

/// Computes beta[0..n_max]. Requires ct.c and ct.a of length at least
/// policy.beta_inner_for(d) + n_max; throws naming the required length.
BetaTable beta(const ModelSpec& spec, const CoeffTable& ct, std::size_t n_max,
               const TruncationPolicy& policy = {});

/// Convenience: builds a coefficient table of the right length internally.
BetaTable beta(const ModelSpec& spec, std::size_t n_max,
               const TruncationPolicy& policy = {});

/// Short-memory envelope F(j) = (sum_v |c_v|) (sum_{u>=j} |a_u|) for
/// 0 <= j <= j_max, with geometric tail certificates. Long-memory specs are
/// rejected ("F undefined under long memory").
RealSeq envelope_F(const CoeffTable& ct, std::size_t j_max);

struct FourierCheckRow {
    std::size_t n;
    double quadrature;
    double series;
    double diff;
};

/// Cross-check: the n-th Fourier coefficient of the boundary phase function
/// h(1/z)/h(z), computed by quadrature with symmetric refinement around the
/// theta = 0 jump, against the series value of beta_n. Agreement is expected
/// at the 1e-4 level for d > 0 and near machine precision for ARMA.
std::vector<FourierCheckRow> beta_fourier_check(const ModelSpec& spec,
                                                const std::vector<std::size_t>& n_list);

} // namespace verblunsky
