#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "filmspec/eigensolver.hpp"

namespace filmspec {

/// Leading N x N block of A_+. sub[i] is entry (i+2, i+1), super[i] is entry
/// (i+1, i+2), diag[i] is entry (i+1, i+1).
struct TruncatedMatrix {
    int N = 0;
    double epsilon = 0.0;
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;

    Eigen::MatrixXd dense() const;
    double trace() const;
};

/// Throws ConfigError for N < 2 or eps <= 0.
TruncatedMatrix build_truncated_matrix(double eps, int N);

/// All N eigenvalues, sorted by real part then imaginary part. Conjugate
/// pairs are exact conjugates. Throws ConvergenceError if QR fails.
std::vector<std::complex<double>> dense_eigenvalues(const TruncatedMatrix& m);
std::vector<std::complex<double>> dense_eigenvalues(const Eigen::MatrixXd& m);

struct EigenvalueMatch {
    int index = 0;
    double shooting = 0.0;
    std::complex<double> nearest;
    double distance = 0.0;
    bool matched = false;
};

struct ComparisonReport {
    std::vector<EigenvalueMatch> matches;
    /// Truncated eigenvalues with |Im| > tol.
    int nonreal_count = 0;
    /// Largest k such that the lowest k shooting eigenvalues are all matched.
    int agreement_prefix = 0;
    bool all_matched = false;
};

/// Matches each shooting eigenvalue to the nearest truncated eigenvalue;
/// matched means |distance| <= tol. Throws ConfigError on empty input.
ComparisonReport compare_spectra(std::span<const std::complex<double>> trunc,
                                 std::span<const EigenvalueRecord> shooting, double tol);

struct TruncationRun {
    int N = 0;
    std::vector<std::complex<double>> eigenvalues;
    ComparisonReport report;
    /// |sum of eigenvalues - N(N+1)/2| / (N(N+1)/2).
    double trace_error = 0.0;
    /// Every non-real eigenvalue has its conjugate in the list.
    bool conjugate_pairs = false;
};

bool has_conjugate_pairs(std::span<const std::complex<double>> values, double tol);

/// One TruncationRun per N, in the order given; jobs run on up to `threads` workers.
std::vector<TruncationRun> truncation_sweep(double eps, std::span<const int> sizes,
                                            std::span<const EigenvalueRecord> shooting, double tol,
                                            unsigned threads = 1);

}  // namespace filmspec
