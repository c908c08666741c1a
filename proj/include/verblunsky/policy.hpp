#pragma once

#include <cstddef>

namespace verblunsky {

/// Truncation controls shared by the phase-coefficient and PACF pipelines.
///
/// V is the state/inner-sum length of the discrete recursion; for long-memory
/// models it also sets the depth of the graded tail mesh (see engine.cpp).
/// The series over odd terms stops once two consecutive terms fall below
/// term_tol relative to the running partial sum (floored at abs_floor).
struct TruncationPolicy {
    std::size_t V = 4096;
    std::size_t k_max = 200;
    double term_tol = 1e-10;
    double abs_floor = 1e-300;

    // inner-sum length for the phase coefficients; 0 = auto
    // (2^18 for long memory, 2^10 otherwise)
    std::size_t beta_inner = 0;
    // tail correction for the phase-coefficient sums; -1 = auto (on iff d > 0)
    int tail_correction = -1;
    // exact head length of the long-memory engine state
    std::size_t head = 512;

    std::size_t beta_inner_for(double d) const {
        if (beta_inner) return beta_inner;
        return d > 0.0 ? (std::size_t{1} << 18) : (std::size_t{1} << 10);
    }
    bool tail_correction_for(double d) const {
        if (tail_correction >= 0) return tail_correction != 0;
        return d > 0.0;
    }
};

} // namespace verblunsky
