#include "filmspec/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "filmspec/errors.hpp"
#include "filmspec/parallel.hpp"
#include "filmspec/params.hpp"
#include "filmspec/recurrence.hpp"
#include "filmspec/subordinate.hpp"

namespace filmspec {
namespace {

constexpr double kMaxLog = 709.0;

// sum_{n > N} n^-s by Euler-Maclaurin, s > 1.
double zeta_tail(double N, double s) {
    return std::pow(N, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(N, -s) + s / 12.0 * std::pow(N, -s - 1.0);
}

// a * b * 2^(ea + eb) / d, or exp of the logs when the mantissa product is
// not a normal double.
double scaled_quotient(const ScaledSequence& x, int i, const ScaledSequence& y, int j, double d) {
    const double t = x.mantissa(i) * y.mantissa(j);
    const std::int64_t e = x.exponent() + y.exponent();
    if (std::isnormal(t) && std::abs(e) < 900) {
        return std::ldexp(t / d, static_cast<int>(e));
    }
    const double log_mag = x.log_abs(i) + y.log_abs(j) - std::log(std::abs(d));
    if (log_mag > kMaxLog) {
        throw OverflowError("kernel entry exceeds binary64 range; reduce n_max");
    }
    return (t < 0.0 ? -1.0 : 1.0) * std::exp(log_mag);
}

}  // namespace

FundamentalPair build_fundamental_pair(double eps, int n_max, int M) {
    require_subcritical(eps);
    if (n_max < 3 || M <= n_max + 2) {
        throw ConfigError("build_fundamental_pair needs n_max >= 3 and M > n_max + 2");
    }
    const Params p(eps, 0.0);
    FundamentalPair pair;
    pair.epsilon = eps;
    pair.M = M;
    pair.phi = forward_run(p, 1, 1.0, 1.0 / eps, n_max + 1);
    pair.w = compute_subordinate(p, M, n_max + 1).w;

    for (int n = 1; n <= n_max + 1; ++n) {
        if (pair.phi.sign(n) <= 0 || pair.w.sign(n) <= 0) {
            throw ConfigError("fundamental solutions lost positivity at n=" + std::to_string(n));
        }
    }
    pair.sigma.resize(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        const double nn = n;
        // sigma_n / (phi_n w_n), every term positive.
        double r = nn;
        if (n > 1) {
            r += 0.5 * eps * nn * (nn - 1.0) * std::exp(pair.log_phi(n - 1) - pair.log_phi(n));
        }
        r += 0.5 * eps * nn * (nn + 1.0) * std::exp(pair.log_w(n + 1) - pair.log_w(n));
        pair.sigma[static_cast<std::size_t>(n - 1)] = r * std::exp(pair.log_phi(n) + pair.log_w(n));
    }
    return pair;
}

ResolventKernel assemble_kernel(const FundamentalPair& pair, unsigned threads) {
    const int N = pair.n_max();
    ResolventKernel k;
    k.epsilon = pair.epsilon;
    k.n_max = N;
    k.pair = pair;
    k.rho.resize(N, N);
    parallel_for(static_cast<std::size_t>(N), threads, [&](std::size_t col) {
        const int n = static_cast<int>(col) + 1;
        const double s = pair.sigma[col];
        for (int m = 1; m <= N; ++m) {
            double v = 0.0;
            if (m <= n) {
                v = scaled_quotient(pair.phi, m, pair.w, n, s);
            } else {
                v = scaled_quotient(pair.w, m, pair.phi, n, s);
                if ((m + n) % 2 != 0) {
                    v = -v;
                }
            }
            k.rho(m - 1, n - 1) = v;
        }
    });
    return k;
}

HsNormReport hs_norm(const ResolventKernel& kernel) {
    HsNormReport rep;
    const int N = kernel.n_max;
    if (N == 0) {
        return rep;
    }
    rep.window = kernel.rho.norm();
    if (kernel.pair.sigma.empty() || rep.window == 0.0) {
        rep.corrected = rep.window;
        return rep;
    }
    const auto& pair = kernel.pair;
    const double c = 1.0 + 1.0 / pair.epsilon;
    // sum_{m > N} w_m^2 with w_m ~ w_N (N/m)^c.
    const double wN = std::exp(pair.log_w(N));
    const double row_mass = wN * wN * std::pow(static_cast<double>(N), 2.0 * c) * zeta_tail(N, 2.0 * c);

    double row_tail = 0.0;
    for (int n = std::max(1, N / 2); n <= N; ++n) {
        const double ratio = std::exp(pair.log_phi(n)) / pair.sigma[static_cast<std::size_t>(n - 1)];
        const double col = kernel.rho.col(n - 1).squaredNorm() + ratio * ratio * row_mass;
        rep.column_constant = std::max(rep.column_constant, col * std::pow(static_cast<double>(n), 3.0));
    }
    for (int n = 1; n <= N; ++n) {
        const double ratio = std::exp(pair.log_phi(n)) / pair.sigma[static_cast<std::size_t>(n - 1)];
        row_tail += ratio * ratio * row_mass;
    }
    rep.tail = row_tail + rep.column_constant * zeta_tail(N, 3.0);
    rep.corrected = std::sqrt(rep.window * rep.window + rep.tail);
    return rep;
}

double verify_inverse_identity(double eps, const ResolventKernel& kernel, int n_cols) {
    if (n_cols < 1 || n_cols > kernel.n_max - 2) {
        throw ConfigError("verify_inverse_identity needs 1 <= n_cols <= n_max - 2");
    }
    const int rows = kernel.n_max - 2;
    double worst = 0.0;
    for (int n = 1; n <= n_cols; ++n) {
        const auto col = kernel.rho.col(n - 1);
        const std::span<const double> x(col.data(), static_cast<std::size_t>(kernel.n_max));
        double sumsq = 0.0;
        for (int m = 1; m <= rows; ++m) {
            const double r = apply_operator_row(eps, x, m) - (m == n ? 1.0 : 0.0);
            sumsq += r * r;
        }
        worst = std::max(worst, std::sqrt(sumsq));
    }
    return worst;
}

double sigma_spread(const FundamentalPair& pair) {
    const auto [lo, hi] = std::minmax_element(pair.sigma.begin(), pair.sigma.end());
    return *hi / *lo;
}

double upper_kernel_constant(const ResolventKernel& kernel) {
    const double a = -1.0 + 1.0 / kernel.epsilon;
    double c4 = 0.0;
    for (int n = 1; n <= kernel.n_max; ++n) {
        for (int m = 1; m <= n; ++m) {
            const double log_bound = a * std::log(static_cast<double>(m)) - (a + 2.0) * std::log(static_cast<double>(n));
            const double r = std::abs(kernel.rho(m - 1, n - 1));
            if (r > 0.0) {
                c4 = std::max(c4, std::exp(std::log(r) - log_bound));
            }
        }
    }
    return c4;
}

double dominant_eigenvalue(const ResolventKernel& kernel, int max_iterations, double tol) {
    Eigen::VectorXd x = Eigen::VectorXd::Ones(kernel.n_max);
    x.normalize();
    double estimate = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        Eigen::VectorXd y = kernel.rho * x;
        const double next = x.dot(y);
        const double norm = y.norm();
        if (norm == 0.0) {
            return 0.0;
        }
        x = y / norm;
        if (it > 0 && std::abs(next - estimate) <= tol * std::abs(next)) {
            return next;
        }
        estimate = next;
    }
    return estimate;
}

}  // namespace filmspec
