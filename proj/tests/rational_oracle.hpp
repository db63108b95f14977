#pragma once

// Exact rational reference for the recurrences. Inputs are the exact binary
// values of the doubles handed to the library, so any discrepancy is
// rounding in the library's arithmetic.

#include <gmpxx.h>

#include <vector>

namespace oracle {

struct Exact {
    mpq_class eps;
    mpq_class lambda;
};

inline Exact exact(double eps, double lambda) {
    return {mpq_class(eps), mpq_class(lambda)};
}

// v_{n+1} = [n(n-1) v_{n-1} + 2 (n - lambda)/eps v_n] / (n(n+1)).
inline std::vector<mpq_class> forward(const Exact& p, const mpq_class& v1, const mpq_class& v2, int last) {
    std::vector<mpq_class> v(static_cast<std::size_t>(last) + 1);
    v[1] = v1;
    v[2] = v2;
    for (int n = 2; n < last; ++n) {
        const mpq_class nn(n);
        mpq_class next = nn * (nn - 1) * v[n - 1] + 2 * (nn - p.lambda) / p.eps * v[n];
        next /= nn * (nn + 1);
        next.canonicalize();
        v[n + 1] = next;
    }
    return v;
}

// w_n = (n+2)/n w_{n+2} + 2 (n+1-lambda)/(eps n (n+1)) w_{n+1}, from the
// seeds w_{top}, w_{top+1} down to index 1.
inline std::vector<mpq_class> backward(const Exact& p, int top, const mpq_class& w_top,
                                       const mpq_class& w_top1) {
    std::vector<mpq_class> w(static_cast<std::size_t>(top) + 2);
    w[top] = w_top;
    w[top + 1] = w_top1;
    for (int n = top - 1; n >= 1; --n) {
        const mpq_class nn(n);
        mpq_class x = (nn + 2) / nn * w[n + 2] + 2 * (nn + 1 - p.lambda) / (p.eps * nn * (nn + 1)) * w[n + 1];
        x.canonicalize();
        w[n] = x;
    }
    return w;
}

// det(T_N - x I) for the leading N x N block, via
// q_k = (k - x) q_{k-1} + (eps^2/4) k^2 (k-1)^2 q_{k-2}.
inline mpq_class truncated_charpoly(const mpq_class& eps, int N, const mpq_class& x) {
    mpq_class q_prev(1);
    mpq_class q = 1 - x;
    const mpq_class e2 = eps * eps / 4;
    for (int k = 2; k <= N; ++k) {
        const mpq_class kk(k);
        mpq_class next = (kk - x) * q + e2 * kk * kk * (kk - 1) * (kk - 1) * q_prev;
        next.canonicalize();
        q_prev = q;
        q = next;
    }
    return q;
}

// |a - b| / |b| evaluated exactly, then rounded.
inline double relative_error(double a, const mpq_class& b) {
    if (sgn(b) == 0) {
        return a == 0.0 ? 0.0 : 1.0;
    }
    mpq_class d = mpq_class(a) - b;
    d = abs(d) / abs(b);
    return d.get_d();
}

}  // namespace oracle
