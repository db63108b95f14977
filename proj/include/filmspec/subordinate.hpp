#pragma once

#include "filmspec/params.hpp"
#include "filmspec/scaled_sequence.hpp"

namespace filmspec {

/// Backward-start index used unless a caller asks for another one.
inline constexpr int kDefaultCutoff = 4000;
/// Width of the tail window over which the normalization is calibrated.
inline constexpr int kNormalizationWindow = 100;

/// Minimal (decaying) solution v_n = (-1)^n w_n of the recurrence, computed by
/// backward recursion from the cutoff M and stored on 1..n_max.
struct SubordinateSolution {
    Params params;
    int M = 0;
    /// w_1..w_{n_max}; positive for n >= 2 lambda.
    ScaledSequence w;
    /// True when w has been rescaled so that w_n n^c averages to one
    /// (geometrically) over the tail window [M - 100, M].
    bool normalized = false;

    int n_max() const noexcept { return w.last_index(); }
    /// Mantissa of v_n = (-1)^n w_n on the shared scale of w.
    double v_mantissa(int n) const { return (n % 2 == 0 ? 1.0 : -1.0) * w.mantissa(n); }
    /// ln(w_n n^c), the log of the tail-normalized envelope ratio.
    double log_envelope(int n) const;
};

struct SubordinateOptions {
    /// Common factor applied to the two seeds; the normalized solution does
    /// not depend on it.
    double seed_scale = 1.0;
    bool normalize = true;
};

/// Seeds w_{M+i} = (M+i)^-c for i = 1, 2 and recurs down to n = 1.
/// Throws ConfigError unless M > n_max >= 2 and M >= 2 lambda + 10.
SubordinateSolution compute_subordinate(const Params& p, int M, int n_max,
                                        const SubordinateOptions& options = {});

/// Largest discrepancy over n <= n_check between the solutions started at
/// M1 and M2.
///
/// Both solutions are first brought to unit l2 norm on 1..n_check, because
/// the tail normalization itself carries an O(lambda / (eps M)) bias that
/// differs between cutoffs. The discrepancy is reported relative to the
/// largest entry. Throws ConfigError unless M2 > M1 > n_check.
double check_m_consistency(const Params& p, int M1, int M2, int n_check);

}  // namespace filmspec
