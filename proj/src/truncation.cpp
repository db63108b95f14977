#include "filmspec/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "filmspec/errors.hpp"
#include "filmspec/parallel.hpp"

namespace filmspec {

Eigen::MatrixXd TruncatedMatrix::dense() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        a(i, i) = diag[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i + 1 < N; ++i) {
        a(i + 1, i) = sub[static_cast<std::size_t>(i)];
        a(i, i + 1) = super[static_cast<std::size_t>(i)];
    }
    return a;
}

double TruncatedMatrix::trace() const {
    double t = 0.0;
    for (double d : diag) {
        t += d;
    }
    return t;
}

TruncatedMatrix build_truncated_matrix(double eps, int N) {
    if (N < 2) {
        throw ConfigError("truncation size N must be >= 2");
    }
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw ConfigError("epsilon must be positive");
    }
    TruncatedMatrix m;
    m.N = N;
    m.epsilon = eps;
    m.diag.resize(static_cast<std::size_t>(N));
    m.sub.resize(static_cast<std::size_t>(N - 1));
    m.super.resize(static_cast<std::size_t>(N - 1));
    for (int n = 1; n <= N; ++n) {
        m.diag[static_cast<std::size_t>(n - 1)] = n;
    }
    for (int n = 1; n < N; ++n) {
        const double nn = n;
        const double t = 0.5 * eps * nn * (nn + 1.0);
        m.sub[static_cast<std::size_t>(n - 1)] = t;
        m.super[static_cast<std::size_t>(n - 1)] = -t;
    }
    return m;
}

std::vector<std::complex<double>> dense_eigenvalues(const Eigen::MatrixXd& a) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("QR iteration did not converge");
    }
    const auto& ev = solver.eigenvalues();
    std::vector<std::complex<double>> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.real() != y.real()) {
            return x.real() < y.real();
        }
        return x.imag() < y.imag();
    });
    return out;
}

std::vector<std::complex<double>> dense_eigenvalues(const TruncatedMatrix& m) {
    return dense_eigenvalues(m.dense());
}

ComparisonReport compare_spectra(std::span<const std::complex<double>> trunc,
                                 std::span<const EigenvalueRecord> shooting, double tol) {
    if (trunc.empty() || shooting.empty()) {
        throw ConfigError("compare_spectra needs nonempty inputs");
    }
    ComparisonReport rep;
    for (const auto& z : trunc) {
        if (std::abs(z.imag()) > tol) {
            ++rep.nonreal_count;
        }
    }
    bool prefix_open = true;
    for (std::size_t i = 0; i < shooting.size(); ++i) {
        EigenvalueMatch m;
        m.index = shooting[i].index;
        m.shooting = shooting[i].lambda;
        m.distance = std::numeric_limits<double>::infinity();
        for (const auto& z : trunc) {
            const double d = std::abs(z - m.shooting);
            if (d < m.distance) {
                m.distance = d;
                m.nearest = z;
            }
        }
        m.matched = m.distance <= tol;
        if (prefix_open && m.matched) {
            ++rep.agreement_prefix;
        } else {
            prefix_open = false;
        }
        rep.matches.push_back(m);
    }
    rep.all_matched = rep.agreement_prefix == static_cast<int>(shooting.size());
    return rep;
}

bool has_conjugate_pairs(std::span<const std::complex<double>> values, double tol) {
    for (const auto& z : values) {
        if (z.imag() == 0.0) {
            continue;
        }
        const auto target = std::conj(z);
        const double scale = std::max(1.0, std::abs(z));
        const bool found = std::any_of(values.begin(), values.end(), [&](const auto& y) {
            return std::abs(y - target) <= tol * scale;
        });
        if (!found) {
            return false;
        }
    }
    return true;
}

std::vector<TruncationRun> truncation_sweep(double eps, std::span<const int> sizes,
                                            std::span<const EigenvalueRecord> shooting, double tol,
                                            unsigned threads) {
    std::vector<TruncationRun> runs(sizes.size());
    parallel_for(sizes.size(), threads, [&](std::size_t i) {
        const auto m = build_truncated_matrix(eps, sizes[i]);
        auto& run = runs[i];
        run.N = m.N;
        run.eigenvalues = dense_eigenvalues(m);
        run.report = compare_spectra(run.eigenvalues, shooting, tol);
        std::complex<double> sum = 0.0;
        for (const auto& z : run.eigenvalues) {
            sum += z;
        }
        const double tr = m.trace();
        run.trace_error = std::abs(sum - tr) / tr;
        run.conjugate_pairs = has_conjugate_pairs(run.eigenvalues, 1e-12);
    });
    return runs;
}

}  // namespace filmspec
