#include "filmspec/subordinate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "filmspec/errors.hpp"
#include "filmspec/recurrence.hpp"

namespace filmspec {

double SubordinateSolution::log_envelope(int n) const {
    return w.log_abs(n) + params.exponents().c * std::log(static_cast<double>(n));
}

SubordinateSolution compute_subordinate(const Params& p, int M, int n_max,
                                        const SubordinateOptions& options) {
    if (n_max < 2 || M <= n_max) {
        throw ConfigError("compute_subordinate needs M > n_max >= 2 (M=" + std::to_string(M) +
                          ", n_max=" + std::to_string(n_max) + ")");
    }
    if (static_cast<double>(M) < 2.0 * p.lambda() + 10.0) {
        throw ConfigError("cutoff M=" + std::to_string(M) + " too small for lambda=" +
                          std::to_string(p.lambda()) + " (need M >= 2 lambda + 10)");
    }
    if (!(options.seed_scale > 0.0) || !std::isfinite(options.seed_scale)) {
        throw ConfigError("seed scale must be positive and finite");
    }
    const double c = p.exponents().c;

    // Seed mantissas ((M+i)/M)^-c on the scale M^-c, split into a binary
    // exponent plus a fractional factor in [1, 2).
    const double log_base = -c * std::log(static_cast<double>(M));
    const double bits = log_base / std::numbers::ln2;
    const double whole = std::floor(bits);
    const double frac = std::exp((bits - whole) * std::numbers::ln2) * options.seed_scale;
    const auto rel = [&](int i) {
        return std::pow(static_cast<double>(M + i) / static_cast<double>(M), -c) * frac;
    };

    ScaledSequence w = ScaledSequence::zeros(1, n_max);
    RecurrenceWindow win{rel(2), rel(1), static_cast<std::int64_t>(whole)};
    win.renormalize();
    w.shift_exponent(win.exponent);

    const int window_lo = std::max({M - kNormalizationWindow, 1,
                                    static_cast<int>(std::ceil(2.0 * p.lambda())) + 1});
    double log_sum = 0.0;
    int log_count = 0;

    for (int n = M; n >= 1; --n) {
        const double wn = backward_step(p, n, win.newer, win.older);
        win.older = win.newer;
        win.newer = wn;
        if (n <= n_max) {
            w.set_mantissa(n, wn);
        }
        if (const auto shift = win.renormalize(); shift != 0) {
            w.shift_exponent(shift);
        }
        if (n >= window_lo && win.newer > 0.0) {
            log_sum += std::log(win.newer) + static_cast<double>(win.exponent) * std::numbers::ln2 +
                       c * std::log(static_cast<double>(n));
            ++log_count;
        }
    }
    w.rescale();

    SubordinateSolution sol{p, M, std::move(w), false};
    if (options.normalize && log_count > 0) {
        sol.w.scale_by_log(-log_sum / log_count);
        sol.normalized = true;
    }
    return sol;
}

namespace {

std::vector<double> unit_window(const SubordinateSolution& s, int n_check) {
    std::vector<double> out(static_cast<std::size_t>(n_check));
    double sumsq = 0.0;
    for (int n = 1; n <= n_check; ++n) {
        const double m = s.w.mantissa(n);
        out[static_cast<std::size_t>(n - 1)] = m;
        sumsq += m * m;
    }
    const double norm = std::sqrt(sumsq);
    for (double& x : out) {
        x /= norm;
    }
    return out;
}

}  // namespace

double check_m_consistency(const Params& p, int M1, int M2, int n_check) {
    if (n_check < 2 || !(M2 > M1 && M1 > n_check)) {
        throw ConfigError("check_m_consistency needs M2 > M1 > n_check >= 2");
    }
    const auto a = unit_window(compute_subordinate(p, M1, n_check), n_check);
    const auto b = unit_window(compute_subordinate(p, M2, n_check), n_check);
    double peak = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        peak = std::max(peak, std::abs(b[i]));
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst / peak;
}

}  // namespace filmspec
