#include "filmspec/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "filmspec/errors.hpp"
#include "shooting_kernel.hpp"

namespace filmspec {

double forward_step(const Params& p, int n, double v_prev, double v_cur) {
    const double nn = n;
    const double lower = nn * (nn - 1.0) * v_prev;
    const double middle = 2.0 * (nn - p.lambda()) / p.epsilon() * v_cur;
    return (lower + middle) / (nn * (nn + 1.0));
}

double backward_step(const Params& p, int n, double w_next, double w_next2) {
    const double nn = n;
    const double outer = (nn + 2.0) / nn * w_next2;
    const double middle = 2.0 * (nn + 1.0 - p.lambda()) / (p.epsilon() * nn * (nn + 1.0)) * w_next;
    return outer + middle;
}

double shooting_residual(const Params& p, double v1, double v2) {
    return p.epsilon() * v2 - (1.0 - p.lambda()) * v1;
}

RowResidual recurrence_row(const Params& p, int n, double v_prev, double v_cur, double v_next) {
    const double nn = n;
    const double t0 = nn * (nn - 1.0) * v_prev;
    const double t1 = -nn * (nn + 1.0) * v_next;
    const double t2 = 2.0 * (nn - p.lambda()) / p.epsilon() * v_cur;
    return RowResidual{t0 + t1 + t2, std::max({std::abs(t0), std::abs(t1), std::abs(t2)})};
}

ScaledSequence forward_run(const Params& p, int first, double seed0, double seed1, int last,
                           std::int64_t exponent) {
    if (first < 1 || last < first + 1) {
        throw ConfigError("forward_run needs 1 <= first < last");
    }
    using detail::quad;
    ScaledSequence out = ScaledSequence::zeros(first, last);
    out.shift_exponent(exponent);
    out.set_mantissa(first, seed0);
    out.set_mantissa(first + 1, seed1);
    quad older = seed0;
    quad newer = seed1;
    std::int64_t e = exponent;
    for (int n = first + 1; n < last; ++n) {
        const quad next = detail::forward_step_t<quad>(p, n, older, newer);
        older = newer;
        newer = next;
        out.set_mantissa(n + 1, static_cast<double>(next));
        if (const auto shift = detail::renormalize(older, newer, e); shift != 0) {
            out.shift_exponent(shift);
        }
    }
    out.rescale();
    return out;
}

ScaledSequence backward_run(const Params& p, int top, double seed_top, double seed_top1, int first,
                            std::int64_t exponent) {
    if (first < 1 || top < first) {
        throw ConfigError("backward_run needs 1 <= first <= top");
    }
    using detail::quad;
    ScaledSequence out = ScaledSequence::zeros(first, top + 1);
    out.shift_exponent(exponent);
    out.set_mantissa(top, seed_top);
    out.set_mantissa(top + 1, seed_top1);
    // older holds w_{n+2}, newer holds w_{n+1}
    quad older = seed_top1;
    quad newer = seed_top;
    std::int64_t e = exponent;
    for (int n = top - 1; n >= first; --n) {
        const quad w = detail::backward_step_t<quad>(p, n, newer, older);
        older = newer;
        newer = w;
        out.set_mantissa(n, static_cast<double>(w));
        if (const auto shift = detail::renormalize(older, newer, e); shift != 0) {
            out.shift_exponent(shift);
        }
    }
    out.rescale();
    return out;
}

double apply_operator_row(double eps, std::span<const double> x, int m) {
    const auto at = [&](int k) {
        return (k >= 1 && k <= static_cast<int>(x.size())) ? x[static_cast<std::size_t>(k - 1)] : 0.0;
    };
    const double mm = m;
    return 0.5 * eps * mm * (mm - 1.0) * at(m - 1) - 0.5 * eps * mm * (mm + 1.0) * at(m + 1) + mm * at(m);
}

double apply_transpose_row(double eps, std::span<const double> y, int m) {
    const auto at = [&](int k) {
        return (k >= 1 && k <= static_cast<int>(y.size())) ? y[static_cast<std::size_t>(k - 1)] : 0.0;
    };
    const double mm = m;
    return -0.5 * eps * (mm - 1.0) * mm * at(m - 1) + 0.5 * eps * (mm + 1.0) * mm * at(m + 1) + mm * at(m);
}

}  // namespace filmspec
