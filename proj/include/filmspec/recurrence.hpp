#pragma once

#include <cstdint>
#include <span>

#include "filmspec/params.hpp"
#include "filmspec/scaled_sequence.hpp"

namespace filmspec {

// Eigen-equation of the one-sided operator, written as a three-term
// recurrence on v_1, v_2, ...:
//
//   n(n-1) v_{n-1} - n(n+1) v_{n+1} + 2 (n - lambda)/eps v_n = 0,   n >= 2,
//
// with the n = 1 row  eps v_2 = (1 - lambda) v_1  acting as an initial
// condition. Writing v_n = (-1)^n w_n gives the backward form used for the
// decaying solution:
//
//   w_n = (n+2)/n w_{n+2} + 2 (n+1-lambda)/(eps n (n+1)) w_{n+1}.

/// v_{n+1} from v_{n-1} and v_n. Requires n >= 2.
double forward_step(const Params& p, int n, double v_prev, double v_cur);

/// w_n from w_{n+1} and w_{n+2}. Requires n >= 1.
double backward_step(const Params& p, int n, double w_next, double w_next2);

/// eps v_2 - (1 - lambda) v_1; zero exactly when the initial row holds.
double shooting_residual(const Params& p, double v1, double v2);

/// Recurrence row n evaluated on (v_{n-1}, v_n, v_{n+1}).
struct RowResidual {
    double residual;
    double largest_term;
};
RowResidual recurrence_row(const Params& p, int n, double v_prev, double v_cur, double v_next);

/// Forward run seeded with x_first, x_first+1 in units of 2^exponent and
/// continued up to index `last`.
ScaledSequence forward_run(const Params& p, int first, double seed0, double seed1, int last,
                           std::int64_t exponent = 0);

/// Backward run of the w-recurrence seeded at top and top+1 (in units of
/// 2^exponent), continued down to index `first` >= 1.
ScaledSequence backward_run(const Params& p, int top, double seed_top, double seed_top1, int first,
                            std::int64_t exponent = 0);

/// Row m (1-based) of the operator applied to x, where x[0] holds x_1 and
/// entries outside the span count as zero:
///   (A x)_m = eps/2 m(m-1) x_{m-1} - eps/2 m(m+1) x_{m+1} + m x_m.
double apply_operator_row(double eps, std::span<const double> x, int m);

/// Row m of the transposed operator applied to y.
double apply_transpose_row(double eps, std::span<const double> y, int m);

}  // namespace filmspec
