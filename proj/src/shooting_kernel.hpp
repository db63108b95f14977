#pragma once

// Recurrence runs in a selectable floating type. Internal to the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "filmspec/params.hpp"
#include "filmspec/scaled_sequence.hpp"
#include "filmspec/subordinate.hpp"

namespace filmspec::detail {

using quad = __float128;

template <typename T>
constexpr double unit_roundoff() {
    if constexpr (std::is_same_v<T, quad>) {
        return 0x1p-113;
    } else {
        return static_cast<double>(std::numeric_limits<T>::epsilon()) / 2.0;
    }
}

template <typename T>
T abs_of(T x) {
    return x < T(0) ? -x : x;
}

/// x * 2^k, exact.
template <typename T>
T times_pow2(T x, std::int64_t k) {
    if (k == 0) {
        return x;
    }
    const auto e = static_cast<int>(std::clamp<std::int64_t>(k, -16000, 16000));
    return x * static_cast<T>(std::ldexp(1.0L, e));
}

/// Value m * 2^e with |m| kept moderate.
template <typename T>
struct Entry {
    T m = T(0);
    std::int64_t e = 0;
};

/// Shift the common exponent of (a, b) when they leave the mantissa band.
template <typename T>
std::int64_t renormalize(T& a, T& b, std::int64_t& e) {
    const long double peak = std::max<long double>(static_cast<long double>(abs_of(a)),
                                                   static_cast<long double>(abs_of(b)));
    if (peak == 0.0L || !std::isfinite(peak)) {
        return 0;
    }
    const int order = std::ilogb(peak);
    if (order < ScaledSequence::kRescaleBits && order > -ScaledSequence::kRescaleBits) {
        return 0;
    }
    a = times_pow2(a, -order);
    b = times_pow2(b, -order);
    e += order;
    return order;
}

template <typename T>
T forward_step_t(const Params& p, int n, T v_prev, T v_cur) {
    const T nn = T(n);
    const T eps = T(p.epsilon());
    const T lam = T(p.lambda());
    return (nn * (nn - T(1)) * v_prev + T(2) * (nn - lam) / eps * v_cur) / (nn * (nn + T(1)));
}

template <typename T>
T backward_step_t(const Params& p, int n, T w_next, T w_next2) {
    const T nn = T(n);
    const T eps = T(p.epsilon());
    const T lam = T(p.lambda());
    return (nn + T(2)) / nn * w_next2 + T(2) * (nn + T(1) - lam) / (eps * nn * (nn + T(1))) * w_next;
}

/// Forward solution with u_1 = 1, u_2 = (1 - lambda)/eps on 1..last.
template <typename T>
std::vector<Entry<T>> forward_entries(const Params& p, int last) {
    std::vector<Entry<T>> out(static_cast<std::size_t>(last) + 1);
    T prev = T(1);
    T cur = (T(1) - T(p.lambda())) / T(p.epsilon());
    std::int64_t e = 0;
    out[1] = {prev, e};
    if (last >= 2) {
        out[2] = {cur, e};
    }
    for (int n = 2; n < last; ++n) {
        const T next = forward_step_t(p, n, prev, cur);
        prev = cur;
        cur = next;
        renormalize(prev, cur, e);
        out[static_cast<std::size_t>(n) + 1] = {cur, e};
    }
    return out;
}

/// Backward run of the w-recurrence from the cutoff M.
template <typename T>
struct BackwardRun {
    /// w_1..w_last as stored; index 0 unused.
    std::vector<Entry<T>> w;
    /// ln of the tail normalization; normalized w is w / exp(log_norm).
    double log_norm = 0.0;
};

/// Steps above `wide_from` run in binary64 and the rest in T. Rounding in the
/// tail feeds only the dominant (decaying) branch, so it is not amplified.
template <typename T>
BackwardRun<T> backward_entries(const Params& p, int M, int last, int wide_from = -1) {
    const double c = p.exponents().c;
    const double log_base = -c * std::log(static_cast<double>(M));
    const double bits = log_base / std::numbers::ln2;
    const double whole = std::floor(bits);
    const long double frac = std::exp(static_cast<long double>((bits - whole) * std::numbers::ln2));
    const auto rel = [&](int i) {
        return std::pow(static_cast<long double>(M + i) / static_cast<long double>(M),
                        static_cast<long double>(-c)) * frac;
    };
    if (wide_from < 0 || wide_from > M) {
        wide_from = M;
    }

    BackwardRun<T> run;
    run.w.resize(static_cast<std::size_t>(last) + 1);
    auto e = static_cast<std::int64_t>(whole);

    const int window_lo = std::max({M - kNormalizationWindow, 1,
                                    static_cast<int>(std::ceil(2.0 * p.lambda())) + 1});
    double log_sum = 0.0;
    int log_count = 0;
    const auto record = [&](int n, double mant) {
        if (n >= window_lo && mant > 0.0) {
            log_sum += std::log(mant) + static_cast<double>(e) * std::numbers::ln2 +
                       c * std::log(static_cast<double>(n));
            ++log_count;
        }
    };

    double d_next2 = static_cast<double>(rel(2));
    double d_next = static_cast<double>(rel(1));
    int n = M;
    for (; n > wide_from; --n) {
        const double wn = backward_step_t(p, n, d_next, d_next2);
        d_next2 = d_next;
        d_next = wn;
        renormalize(d_next2, d_next, e);
        if (n <= last) {
            run.w[static_cast<std::size_t>(n)] = {T(d_next), e};
        }
        record(n, d_next);
    }
    T next2 = wide_from == M ? static_cast<T>(rel(2)) : T(d_next2);
    T next = wide_from == M ? static_cast<T>(rel(1)) : T(d_next);
    for (; n >= 1; --n) {
        const T wn = backward_step_t(p, n, next, next2);
        next2 = next;
        next = wn;
        renormalize(next2, next, e);
        if (n <= last) {
            run.w[static_cast<std::size_t>(n)] = {next, e};
        }
        record(n, static_cast<double>(next));
    }
    run.log_norm = log_count > 0 ? log_sum / log_count : 0.0;
    return run;
}

/// Difference a - b of two values m * 2^e, returned on the larger exponent,
/// together with |a| + |b| on the same exponent.
template <typename T>
struct Difference {
    T diff;
    T mass;
    std::int64_t e;
};

template <typename T>
Difference<T> difference(Entry<T> a, Entry<T> b) {
    const std::int64_t e = std::max(a.e, b.e);
    const T x = times_pow2(a.m, a.e - e);
    const T y = times_pow2(b.m, b.e - e);
    return {x - y, abs_of(x) + abs_of(y), e};
}

template <typename T>
Entry<T> product(Entry<T> a, Entry<T> b) {
    return {a.m * b.m, a.e + b.e};
}

/// Shooting function from the Casoratian of u and v = (-1)^n w.
struct CasoratianResult {
    int sign = 0;
    /// ln|f| with v tail-normalized.
    double log_abs = 0.0;
    int match_index = 1;
    /// Amplification of a relative perturbation at the match index.
    double condition = 1.0;
    /// Roundoff-based relative error bound for f.
    double error_estimate = 0.0;
};

template <typename T>
Entry<T> signed_v(const BackwardRun<T>& run, int n) {
    const auto& x = run.w[static_cast<std::size_t>(n)];
    return {(n % 2 == 0) ? x.m : -x.m, x.e};
}

/// f at index j: -(eps/2) (-1)^j j (j+1) (u_j v_{j+1} - u_{j+1} v_j).
template <typename T>
CasoratianResult casoratian_at(const Params& p, const std::vector<Entry<T>>& u, const BackwardRun<T>& v,
                               int j) {
    const auto d = difference(product(u[static_cast<std::size_t>(j)], signed_v(v, j + 1)),
                              product(u[static_cast<std::size_t>(j) + 1], signed_v(v, j)));
    CasoratianResult r;
    r.match_index = j;
    const double jj = j;
    const T f = -T(0.5 * p.epsilon() * jj * (jj + 1.0)) * ((j % 2 == 0) ? T(1) : T(-1)) * d.diff;
    if (f == T(0)) {
        r.sign = 0;
        r.log_abs = -std::numeric_limits<double>::infinity();
        r.condition = std::numeric_limits<double>::infinity();
        return r;
    }
    r.sign = f > T(0) ? 1 : -1;
    r.log_abs = std::log(static_cast<double>(abs_of(f))) + static_cast<double>(d.e) * std::numbers::ln2 - v.log_norm;
    r.condition = static_cast<double>(d.mass / abs_of(d.diff));
    return r;
}

/// Number of low indices run in the wide type; beyond it the amplification
/// factor has dropped to O(1).
inline int wide_span(const Params& p, int M) {
    return std::min(M - 2, std::max(4, 12 * static_cast<int>(std::ceil(p.lambda())) + 20));
}

/// Evaluate f in type T, matching where the Casoratian is best conditioned
/// (or at match_hint when it is positive).
template <typename T>
CasoratianResult shooting_kernel(const Params& p, int M, int match_hint = 0) {
    const int span = std::max(wide_span(p, M), std::min(match_hint, M - 2));
    const auto u = forward_entries<T>(p, span + 1);
    const auto v = backward_entries<T>(p, M, span + 1, span + 1);
    // binary64 tail steps contribute O(1) amplification each.
    const double tail = unit_roundoff<double>() * (M - span);
    if (match_hint > 0) {
        auto r = casoratian_at(p, u, v, match_hint);
        r.error_estimate = unit_roundoff<T>() * r.condition + tail;
        return r;
    }
    CasoratianResult best;
    best.condition = std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (int j = 1; j <= span; ++j) {
        const auto r = casoratian_at(p, u, v, j);
        total += std::isfinite(r.condition) ? r.condition : 1.0 / unit_roundoff<T>();
        if (r.condition < best.condition) {
            best = r;
        }
    }
    if (!std::isfinite(best.condition)) {
        best = casoratian_at(p, u, v, 1);
    }
    best.error_estimate = unit_roundoff<T>() * total + tail;
    return best;
}

}  // namespace filmspec::detail
