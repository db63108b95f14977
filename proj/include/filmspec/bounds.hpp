#pragma once

#include <string>
#include <vector>

#include "filmspec/params.hpp"

namespace filmspec {

enum class BoundId {
    growth_upper,
    growth_lower,
    subordinate_envelope,
    monotone_decay,
    lambda_monotone,
    supercritical_decay,
    positive_spectrum,
};

const char* to_string(BoundId id) noexcept;

/// Outcome of one inequality check over a finite index window.
///
/// margins[i] belongs to index first_checked + i (for supercritical_decay the
/// indices are dyadic block starts 2^j instead of consecutive integers, held in
/// `indices`). A margin >= 0 means the inequality holds there. N_emp is the
/// smallest checked index from which every margin through window_end is >= 0;
/// pass is false when the last margin is negative.
struct BoundCheckReport {
    BoundId bound_id = BoundId::growth_upper;
    Params params = Params::unchecked(1.0, 0.0);
    int N_emp = 0;
    int window_end = 0;
    bool pass = false;
    /// Index at which the checked sequence was seeded, or 0.
    int seed_index = 0;
    std::vector<int> indices;
    std::vector<double> margins;
    std::string detail;
};

/// Recomputes N_emp and pass from the stored margins; true if they agree
/// with the report.
bool recheck(const BoundCheckReport& report);

/// Forward solution seeded with v_{N-i} = (1+delta)(N-i)^a, i = 1, 2, checked
/// against n^a <= v_n <= (1+delta) n^a on [N, window_end]. The seed index
/// starts at max(ceil(lambda)+3, ceil(2+k/delta)) and is doubled while the
/// envelope fails at window_end. Returns the growth_lower report (lower
/// side) and growth_upper report (upper side) in that order.
std::vector<BoundCheckReport> check_growth_envelope(double eps, double lambda, double delta,
                                                    int window_end);

/// Normalized subordinate solution against (1 - h/n) n^-c <= w_n <= n^-c on
/// [1, window_end]. Throws ConfigError unless window_end < M.
BoundCheckReport check_subordinate_envelope(double eps, double lambda, int M, int window_end);

/// Strict decay w_{n+1} < w_n of the subordinate solution on
/// [1, window_end] with window_end = M - 101. pass additionally requires
/// N_emp <= max(1, ceil(2 lambda)).
BoundCheckReport check_monotonicity(double eps, double lambda, int M);

/// Ordering w_{lambda',n} <= w_{lambda,n} with lambda' = lambda + dlambda, plus
/// the ratio bound w_{lambda,n} <= (1+d) exp(2 d / (eps (n-1))) w_{lambda',n}
/// for n >= max(2, 2 lambda'), after both solutions are normalized on the same
/// tail window. Checked on [max(1, ceil(lambda')), M - 101].
BoundCheckReport check_lambda_monotonicity(double eps, double lambda, int M, double dlambda = 0.5);

/// For eps > 2: two forward solutions seeded at N-2, N-1 with
/// (0, (N-1)^a) and ((N-2)^a, 0), N = ceil(lambda) + 3. Each block sum
/// B_j = sum_{2^j <= n < 2^{j+1}} v_n^2 must satisfy
/// B_{j+1} / B_j <= (1 + 2^{2a+1}) / 2 < 1. Throws ConfigError if eps <= 2.
BoundCheckReport check_supercritical_regime(double eps, double lambda, int window_end = 5000);

/// f(lambda) is nonzero with the same sign at every cutoff in Ms, for each
/// lambda in lambdas (no eigenvalue at or below 1).
BoundCheckReport check_positive_spectrum(double eps, const std::vector<double>& lambdas,
                                         const std::vector<int>& Ms);

/// The parameter sets used by `verify --suite`.
std::vector<BoundCheckReport> run_bound_suite(unsigned threads = 1);

}  // namespace filmspec
