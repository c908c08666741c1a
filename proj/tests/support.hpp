#pragma once

#include "verblunsky/engine.hpp"
#include "verblunsky/oracle.hpp"
#include "verblunsky/phase.hpp"

namespace vbtest {

using namespace verblunsky;

/// Coefficient + phase tables sized for engine use up to n_max.
struct Pipeline {
    ModelSpec spec;
    CoeffTable ct;
    BetaTable bt;
};

inline Pipeline make_pipeline(ModelSpec spec, std::size_t n_max,
                              const TruncationPolicy& pol = {}) {
    const std::size_t W = spec.d > 0.0 ? std::max<std::size_t>(pol.head, 64) : pol.V;
    const std::size_t n_beta = n_max + 2 * W + 2;
    const std::size_t inner = pol.beta_inner_for(spec.d);
    CoeffTable ct = coeff_table(spec, inner + n_beta + 2, n_max + 2);
    BetaTable bt = beta(spec, ct, n_beta, pol);
    return {std::move(spec), std::move(ct), std::move(bt)};
}

/// Tables long enough for the V-truncated discrete recursion at base <= n_max.
inline Pipeline make_discrete_tables(ModelSpec spec, std::size_t n_max,
                                     const TruncationPolicy& pol) {
    const std::size_t n_beta = n_max + 2 * pol.V + 2;
    const std::size_t inner = pol.beta_inner_for(spec.d);
    CoeffTable ct = coeff_table(spec, inner + n_beta + 2, n_max + 2);
    BetaTable bt = beta(spec, ct, n_beta, pol);
    return {std::move(spec), std::move(ct), std::move(bt)};
}

inline ModelSpec ar1() { return {{0.5}, {}, 0.0}; }
inline ModelSpec ma1() { return {{}, {0.5}, 0.0}; }
inline ModelSpec arma11() { return {{0.5}, {0.4}, 0.0}; }
inline ModelSpec farima(double d) { return {{}, {}, d}; }
inline ModelSpec farima_ar(double d) { return {{0.5}, {}, d}; }
inline ModelSpec farima_arma(double d) { return {{0.5}, {0.4}, d}; }

} // namespace vbtest
