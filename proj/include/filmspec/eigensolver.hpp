#pragma once

#include <optional>
#include <span>
#include <vector>

#include "filmspec/subordinate.hpp"

namespace filmspec {

/// Sign and log-magnitude of the shooting function at the solution's
/// internal (tail-normalized) scale. Only the sign drives bracketing.
struct SignedMagnitude {
    int sign = 0;
    double log_abs = 0.0;
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;

    double width() const noexcept { return hi - lo; }
    bool degenerate() const noexcept { return hi == lo; }
};

struct EigenvalueRecord {
    int index = 0;
    double lambda = 0.0;
    Bracket bracket;
    /// Bracket width when bisection stopped.
    double residual_sign_gap = 0.0;
    int M = 0;
    std::optional<double> proj_norm;
};

struct ScanPoint {
    double lambda;
    SignedMagnitude f;
};

struct ScanResult {
    std::vector<ScanPoint> points;
    std::vector<Bracket> brackets;
    /// Grid points where |f| has a sharp local minimum without a sign change.
    /// A double root would look like this; nothing is claimed about them.
    std::vector<double> suspect_minima;
};

/// Floating type used for the recurrence runs behind one evaluation of f.
enum class Precision { binary64, extended, binary128, automatic };

const char* to_string(Precision p) noexcept;

struct ShootingEvaluation {
    SignedMagnitude f;
    /// Index at which the Casoratian was formed.
    int match_index = 1;
    /// Roundoff bound on the relative error of f.
    double error_estimate = 0.0;
    Precision precision = Precision::binary64;
};

/// Relative error bound below which an evaluation is accepted without moving
/// to a wider floating type.
inline constexpr double kShootingTolerance = 1e-10;

/// Shooting function f(lambda) = eps v_2 - (1 - lambda) v_1 on the subordinate
/// solution started at M, normalized as in compute_subordinate.
///
/// With u the forward solution u_1 = 1, u_2 = (1 - lambda)/eps and v the
/// subordinate solution, the recurrence conserves
///   K_j = (-1)^j j (j+1) (u_j v_{j+1} - u_{j+1} v_j),
/// and K_1 = -(2/eps) f. f is formed from K_j at the best conditioned j. A
/// relative rounding error at step j is amplified by
///   (|u_j v_{j+1}| + |u_{j+1} v_j|) / |u_j v_{j+1} - u_{j+1} v_j|,
/// which grows to ~1e16 near the peak of v once lambda is around 40 at
/// eps = 0.1. Precision::automatic starts in binary64 and widens the type
/// until the accumulated bound is below kShootingTolerance.
///
/// Requires 0 < eps < 2, lambda >= 0, M >= 1000.
ShootingEvaluation evaluate_shooting(double eps, double lambda, int M,
                                     Precision precision = Precision::automatic);

SignedMagnitude evaluate_f(double eps, double lambda, int M);

/// The same function formed at a fixed match index j >= 1. j = 1 is the
/// direct formula eps v_2 - (1 - lambda) v_1.
SignedMagnitude shooting_function_at(double eps, double lambda, int M, int match_index,
                                     Precision precision = Precision::binary64);

/// Grid lo, lo + step, ..., hi (last point clipped to hi).
std::vector<double> scan_grid(double lo, double hi, double step);

/// Evaluates f on the scan grid and collects sign-change brackets. Exact
/// zeros at grid points come back as width-0 brackets.
ScanResult scan(double eps, double lo, double hi, double step, int M, unsigned threads = 1);

std::vector<Bracket> scan_brackets(double eps, double lo, double hi, double step, int M,
                                   unsigned threads = 1);

/// Bisection on a sign-change bracket until its width is <= tol (tol = 0
/// bisects down to adjacent doubles). Throws BracketError when the endpoint
/// signs agree.
EigenvalueRecord refine_root(double eps, Bracket bracket, int M, double tol);

struct SpectrumOptions {
    /// Grid step; <= 0 selects default_scan_step(eps).
    double step = 0.0;
    /// Upper limit for the adaptive scan; <= 0 means the largest lambda the
    /// cutoff supports, (M - 10) / 2.
    double max_lambda = 0.0;
    unsigned threads = 1;
};

/// 0.01 for eps <= 0.2, otherwise 0.02.
double default_scan_step(double eps);

/// First `count` real eigenvalues in increasing order. The scan is extended
/// from 0 until enough brackets are found; throws InsufficientRange when the
/// limit is reached first.
std::vector<EigenvalueRecord> compute_spectrum(double eps, int count, int M, double tol,
                                               const SpectrumOptions& options = {});

struct PowerLaw {
    double alpha;
    double gamma;
};

/// Least-squares fit of ln lambda_n = ln alpha + gamma ln n over the records.
/// Throws ConfigError with fewer than three records.
PowerLaw fit_power_law(std::span<const EigenvalueRecord> records);

}  // namespace filmspec
