#pragma once

#include <complex>
#include <vector>

#include "filmspec/eigensolver.hpp"
#include "filmspec/scaled_sequence.hpp"

namespace filmspec {

/// Unit l2 eigenvector of A_+ on 1..n_max.
struct Eigenvector {
    double epsilon = 0.0;
    double lambda = 0.0;
    ScaledSequence entries;
    /// argmax |v_n|, ties toward the smaller index.
    int peak_index = 1;
    /// Entries below this index come from the forward run, the rest from the
    /// subordinate run.
    int stitch_index = 1;

    int n_max() const noexcept { return entries.last_index(); }
};

struct ProjectionReport {
    int index = 0;
    double lambda = 0.0;
    double proj_norm = 0.0;
    /// <v, D v> for unit v, D = diag((-1)^n).
    double overlap = 0.0;
};

/// Default eigenvector window: 400 for eps < 0.5, otherwise M / 2.
int default_eigenvector_size(double eps, int M);

/// Reconstructs the eigenvector for a refined root.
///
/// The root is first bisected down to adjacent doubles inside rec.bracket.
/// The forward solution (which satisfies the initial row exactly) is used up
/// to the index nearest lambda and the subordinate solution beyond it, both
/// in binary128, scaled to agree at the joint. At an eigenvalue the two
/// pieces are one solution, so every recurrence row, including the two
/// around the joint, must balance. Throws ResidualError if any row residual
/// exceeds 1e-8 of its largest term, if the initial row is off by more than
/// 1e-6 max(|v_1|, |v_2|), or if the norm is not 1 to 1e-12.
Eigenvector build_eigenvector(double eps, const EigenvalueRecord& rec, int n_max);

/// ||P|| = ||v|| ||Dv|| / |<v, Dv>|; the adjoint eigenvector is Dv.
/// Throws OverlapError when the overlap of the unit vectors is below 1e-300.
ProjectionReport projection_norm(const Eigenvector& v, int index = 0);

/// max_m |(A^T Dv - lambda Dv)_m| / (lambda max |Dv|) over rows 1..n_max-1.
double adjoint_residual(const Eigenvector& v);

struct ThetaSample {
    double theta;
    std::complex<double> value;
};

/// (2 pi)^-1/2 sum_k v_k e^{i k theta} at theta_j = -pi + 2 pi j / grid_size.
/// Discrete Parseval holds exactly when n_max < grid_size.
std::vector<ThetaSample> synthesize_theta_samples(const Eigenvector& v, int grid_size);

}  // namespace filmspec
