#pragma once

#include "verblunsky/engine.hpp"

namespace verblunsky {

struct LevinsonResult {
    RealSeq alpha;      // alpha[i] = alpha(i+1), i = 0..n_max-1
    PredictorTable phi; // rows filled by the recursion
    RealSeq v;          // v[i] = prediction error variance after order i, v[0] = gamma(0)
};

/// Durbin-Levinson recursion on autocovariances. Consumes gamma only, fully
/// independent of the coefficient/phase pipeline. Throws
/// "gamma not positive definite at step n" if a prediction variance is <= 0.
LevinsonResult levinson(const RealSeq& gamma, std::size_t n_max);

/// Literal nested sum for the odd series terms (no recursion): k must be odd,
/// k <= 5, and V^{k-1} is the cost. Used as an independent oracle for the
/// d_k recursion at matched truncation.
double brute_alpha_term(const BetaTable& bt, std::size_t n, std::size_t k, std::size_t V);

/// Literal nested sum for d_k(n, j), k <= 4.
double brute_dk(const BetaTable& bt, std::size_t n, std::size_t j, std::size_t k,
                std::size_t V);

} // namespace verblunsky
