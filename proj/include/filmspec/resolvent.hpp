#pragma once

#include <Eigen/Dense>
#include <vector>

#include "filmspec/scaled_sequence.hpp"

namespace filmspec {

/// Growing and decaying solutions of the lambda = 0 recurrence and the
/// normalizer sigma that glue them into the kernel of A_+^{-1}.
struct FundamentalPair {
    double epsilon = 0.0;
    int M = 0;
    /// phi_1 = 1, phi_2 = 1/eps, forward recursion; indices 1..n_max+1.
    ScaledSequence phi;
    /// Tail-normalized subordinate w (psi_n = (-1)^n w_n); indices 1..n_max+1.
    ScaledSequence w;
    /// sigma_1..sigma_{n_max} (sigma[0] is sigma_1).
    std::vector<double> sigma;

    int n_max() const noexcept { return static_cast<int>(sigma.size()); }
    double log_phi(int n) const { return phi.log_abs(n); }
    double log_w(int n) const { return w.log_abs(n); }
};

/// Throws ConfigError unless 0 < eps < 2, n_max >= 3 and M > n_max + 2.
FundamentalPair build_fundamental_pair(double eps, int n_max, int M);

struct ResolventKernel {
    double epsilon = 0.0;
    int n_max = 0;
    /// rho(m-1, n-1) = rho_{m,n}.
    Eigen::MatrixXd rho;
    FundamentalPair pair;
};

/// rho_{m,n} = phi_m w_n / sigma_n for m <= n and (-1)^{m+n} w_m phi_n / sigma_n
/// for m > n. Throws OverflowError if an entry does not fit in binary64.
ResolventKernel assemble_kernel(const FundamentalPair& pair, unsigned threads = 1);

struct HsNormReport {
    /// sqrt of the sum of squared entries inside the window.
    double window = 0.0;
    /// C in sum_m rho_{m,n}^2 <= C n^-3, fitted over n in [n_max/2, n_max].
    double column_constant = 0.0;
    /// Estimated squared mass outside the window: rows beyond n_max in the
    /// window columns plus C sum_{n > n_max} n^-3.
    double tail = 0.0;
    /// sqrt(window^2 + tail).
    double corrected = 0.0;
};

HsNormReport hs_norm(const ResolventKernel& kernel);

/// Max over columns n <= n_cols of || A_+ rho(:, n) - e_n ||_2, rows
/// 1..n_max-2. Throws ConfigError unless 1 <= n_cols <= n_max - 2.
double verify_inverse_identity(double eps, const ResolventKernel& kernel, int n_cols);

/// max_n sigma_n / min_n sigma_n.
double sigma_spread(const FundamentalPair& pair);

/// Smallest c4 with |rho_{m,n}| <= c4 m^a n^{-a-2} on the upper triangle m <= n.
double upper_kernel_constant(const ResolventKernel& kernel);

/// Dominant eigenvalue of the kernel matrix by power iteration.
double dominant_eigenvalue(const ResolventKernel& kernel, int max_iterations = 2000, double tol = 1e-13);

}  // namespace filmspec
