#include "filmspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "filmspec/errors.hpp"
#include "filmspec/recurrence.hpp"
#include "shooting_kernel.hpp"

namespace filmspec {
namespace {

constexpr double kRowTolerance = 1e-8;
constexpr double kInitialRowTolerance = 1e-6;
constexpr double kNormTolerance = 1e-12;

using detail::Entry;
using detail::quad;

std::int64_t order_of(const Entry<quad>& x) {
    if (x.m == quad(0)) {
        return std::numeric_limits<std::int64_t>::min();
    }
    return std::ilogb(static_cast<long double>(detail::abs_of(x.m))) + x.e;
}

}  // namespace

int default_eigenvector_size(double eps, int M) {
    return eps < 0.5 ? 400 : M / 2;
}

Eigenvector build_eigenvector(double eps, const EigenvalueRecord& rec, int n_max) {
    const int M = rec.M;
    if (n_max < 3 || n_max >= M) {
        throw ConfigError("build_eigenvector needs 3 <= n_max < M");
    }
    double lambda = rec.lambda;
    if (!rec.bracket.degenerate()) {
        lambda = refine_root(eps, rec.bracket, M, 0.0).lambda;
    }
    const Params p(eps, lambda);
    const int stitch = std::clamp(static_cast<int>(std::lround(lambda)), 1, n_max - 1);

    const auto u = detail::forward_entries<quad>(p, stitch + 1);
    const int wide_from = std::min(M, std::max(n_max + 1, detail::wide_span(p, M)));
    const auto run = detail::backward_entries<quad>(p, M, n_max, wide_from);

    std::vector<Entry<quad>> x(static_cast<std::size_t>(n_max) + 1);
    for (int n = stitch; n <= n_max; ++n) {
        x[static_cast<std::size_t>(n)] = detail::signed_v(run, n);
    }
    // Match the forward piece to the subordinate one at the joint.
    const auto& us = u[static_cast<std::size_t>(stitch)];
    const auto& vs = x[static_cast<std::size_t>(stitch)];
    if (us.m == quad(0)) {
        throw ResidualError("forward solution vanishes at the joint index " + std::to_string(stitch));
    }
    const Entry<quad> ratio{vs.m / us.m, vs.e - us.e};
    for (int n = 1; n < stitch; ++n) {
        x[static_cast<std::size_t>(n)] = detail::product(u[static_cast<std::size_t>(n)], ratio);
    }

    std::int64_t top = std::numeric_limits<std::int64_t>::min();
    for (int n = 1; n <= n_max; ++n) {
        top = std::max(top, order_of(x[static_cast<std::size_t>(n)]));
    }
    std::vector<double> mant(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        const auto& xn = x[static_cast<std::size_t>(n)];
        mant[static_cast<std::size_t>(n - 1)] = static_cast<double>(detail::times_pow2(xn.m, xn.e - top));
    }

    Eigenvector vec;
    vec.epsilon = eps;
    vec.lambda = lambda;
    vec.stitch_index = stitch;
    double sumsq = 0.0;
    for (double m : mant) {
        sumsq += m * m;
    }
    vec.entries = ScaledSequence(1, std::move(mant), top);
    vec.entries.scale_by_log(-0.5 * std::log(sumsq) - static_cast<double>(top) * std::numbers::ln2);

    // Self-checks on the shared-scale mantissas.
    const auto& e = vec.entries;
    double peak = 0.0;
    double norm2 = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double a = std::abs(e.mantissa(n));
        norm2 += a * a;
        if (a > peak) {
            peak = a;
            vec.peak_index = n;
        }
    }
    const double norm = std::sqrt(norm2) * std::exp(e.log_scale());
    if (std::abs(norm - 1.0) > kNormTolerance) {
        throw ResidualError("eigenvector norm " + std::to_string(norm) + " differs from 1");
    }
    for (int n = 2; n < n_max; ++n) {
        const auto row = recurrence_row(p, n, e.mantissa(n - 1), e.mantissa(n), e.mantissa(n + 1));
        if (std::abs(row.residual) > kRowTolerance * row.largest_term) {
            throw ResidualError("recurrence row " + std::to_string(n) + " unbalanced at lambda=" +
                                std::to_string(lambda) + " (relative residual " +
                                std::to_string(std::abs(row.residual) / row.largest_term) + ")");
        }
    }
    const double v1 = e.mantissa(1);
    const double v2 = e.mantissa(2);
    if (std::abs(shooting_residual(p, v1, v2)) > kInitialRowTolerance * std::max(std::abs(v1), std::abs(v2))) {
        throw ResidualError("initial row eps v2 = (1 - lambda) v1 violated at lambda=" + std::to_string(lambda));
    }
    return vec;
}

ProjectionReport projection_norm(const Eigenvector& v, int index) {
    double signed_sum = 0.0;
    double sumsq = 0.0;
    for (int n = 1; n <= v.n_max(); ++n) {
        const double m = v.entries.mantissa(n);
        sumsq += m * m;
        signed_sum += (n % 2 == 0 ? m * m : -m * m);
    }
    ProjectionReport rep;
    rep.index = index;
    rep.lambda = v.lambda;
    rep.overlap = sumsq > 0.0 ? signed_sum / sumsq : 0.0;
    if (!(std::abs(rep.overlap) >= 1e-300)) {
        throw OverlapError("eigenvector and adjoint eigenvector are orthogonal to working precision");
    }
    rep.proj_norm = 1.0 / std::abs(rep.overlap);
    return rep;
}

double adjoint_residual(const Eigenvector& v) {
    const int n_max = v.n_max();
    std::vector<double> y(static_cast<std::size_t>(n_max));
    double peak = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double m = (n % 2 == 0 ? 1.0 : -1.0) * v.entries.mantissa(n);
        y[static_cast<std::size_t>(n - 1)] = m;
        peak = std::max(peak, std::abs(m));
    }
    double worst = 0.0;
    for (int m = 1; m < n_max; ++m) {
        const double r = apply_transpose_row(v.epsilon, y, m) - v.lambda * y[static_cast<std::size_t>(m - 1)];
        worst = std::max(worst, std::abs(r));
    }
    return worst / (v.lambda * peak);
}

std::vector<ThetaSample> synthesize_theta_samples(const Eigenvector& v, int grid_size) {
    if (grid_size < 8) {
        throw ConfigError("grid_size must be >= 8");
    }
    const double pi = std::numbers::pi;
    const double norm = 1.0 / std::sqrt(2.0 * pi);
    const auto coeffs = v.entries.values();
    std::vector<ThetaSample> out(static_cast<std::size_t>(grid_size));
    for (int j = 0; j < grid_size; ++j) {
        const double theta = -pi + 2.0 * pi * j / grid_size;
        std::complex<double> acc{0.0, 0.0};
        for (int k = 1; k <= v.n_max(); ++k) {
            const double c = coeffs[static_cast<std::size_t>(k - 1)];
            if (c != 0.0) {
                acc += c * std::polar(1.0, k * theta);
            }
        }
        out[static_cast<std::size_t>(j)] = {theta, norm * acc};
    }
    return out;
}

}  // namespace filmspec
