#include "filmspec/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "filmspec/eigensolver.hpp"
#include "filmspec/errors.hpp"
#include "filmspec/parallel.hpp"
#include "filmspec/recurrence.hpp"
#include "filmspec/subordinate.hpp"

namespace filmspec {
namespace {

// Slack for rounding in ratios that sit at 1 + O(1/n^2).
constexpr double kRelativeSlack = 1e-12;

void finalize(BoundCheckReport& r) {
    r.pass = false;
    r.N_emp = 0;
    if (r.margins.empty() || r.margins.back() < 0.0) {
        r.N_emp = r.window_end + 1;
        return;
    }
    std::size_t i = r.margins.size();
    while (i > 0 && r.margins[i - 1] >= 0.0) {
        --i;
    }
    r.N_emp = r.indices[i];
    r.pass = true;
}

BoundCheckReport make_report(BoundId id, const Params& p, int window_end) {
    BoundCheckReport r;
    r.bound_id = id;
    r.params = p;
    r.window_end = window_end;
    return r;
}

// ScaledSequence seeded with x_{first} = s0 n^a, x_{first+1} = s1 (n+1)^a.
ScaledSequence growth_run(const Params& p, int first, double s0, double s1, int last) {
    const double a = p.exponents().a;
    const double bits = a * std::log2(static_cast<double>(first));
    const auto e = static_cast<std::int64_t>(std::floor(bits));
    const auto seed = [&](int n, double s) {
        return s * std::exp2(a * std::log2(static_cast<double>(n)) - static_cast<double>(e));
    };
    return forward_run(p, first, seed(first, s0), seed(first + 1, s1), last, e);
}

}  // namespace

const char* to_string(BoundId id) noexcept {
    switch (id) {
        case BoundId::growth_upper: return "growth_upper";
        case BoundId::growth_lower: return "growth_lower";
        case BoundId::subordinate_envelope: return "subordinate_envelope";
        case BoundId::monotone_decay: return "monotone_decay";
        case BoundId::lambda_monotone: return "lambda_monotone";
        case BoundId::supercritical_decay: return "supercritical_decay";
        case BoundId::positive_spectrum: return "positive_spectrum";
    }
    return "unknown";
}

bool recheck(const BoundCheckReport& report) {
    BoundCheckReport copy = report;
    finalize(copy);
    return copy.pass == report.pass && (!report.pass || copy.N_emp == report.N_emp);
}

std::vector<BoundCheckReport> check_growth_envelope(double eps, double lambda, double delta,
                                                    int window_end) {
    const Params p(eps, lambda);
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw ConfigError("growth envelope needs delta > 0");
    }
    const auto ex = p.exponents();
    int N = std::max(static_cast<int>(std::ceil(lambda)) + 3,
                     static_cast<int>(std::ceil(2.0 + ex.k / delta)));
    if (window_end <= N) {
        throw ConfigError("window_end must exceed the seed index " + std::to_string(N));
    }
    std::vector<BoundCheckReport> out;
    while (true) {
        const auto v = growth_run(p, N - 2, 1.0 + delta, 1.0 + delta, window_end);
        auto lower = make_report(BoundId::growth_lower, p, window_end);
        auto upper = make_report(BoundId::growth_upper, p, window_end);
        for (int n = N; n <= window_end; ++n) {
            double lower_margin = -1.0;
            double upper_margin = -1.0;
            if (v.sign(n) > 0) {
                const double ratio = std::exp(v.log_abs(n) - ex.a * std::log(static_cast<double>(n)));
                lower_margin = ratio - 1.0 + kRelativeSlack;
                upper_margin = (1.0 + delta) * (1.0 + kRelativeSlack) - ratio;
            }
            for (auto* r : {&lower, &upper}) {
                r->indices.push_back(n);
                r->seed_index = N;
            }
            lower.margins.push_back(lower_margin);
            upper.margins.push_back(upper_margin);
        }
        finalize(lower);
        finalize(upper);
        const bool ok = lower.pass && upper.pass;
        if (ok || 2 * N >= window_end / 2) {
            out.push_back(std::move(lower));
            out.push_back(std::move(upper));
            return out;
        }
        N *= 2;
    }
}

BoundCheckReport check_subordinate_envelope(double eps, double lambda, int M, int window_end) {
    const Params p(eps, lambda);
    if (window_end >= M) {
        throw ConfigError("subordinate envelope needs window_end < M");
    }
    if (window_end < 2) {
        throw ConfigError("subordinate envelope needs window_end >= 2");
    }
    const auto ex = p.exponents();
    const auto sol = compute_subordinate(p, M, window_end);
    auto r = make_report(BoundId::subordinate_envelope, p, window_end);
    r.seed_index = M + 1;
    for (int n = 1; n <= window_end; ++n) {
        double margin = -1.0;
        if (sol.w.sign(n) > 0) {
            const double ratio = std::exp(sol.log_envelope(n));
            const double lo = 1.0 - ex.h / n;
            margin = std::min(ratio - lo + kRelativeSlack, 1.0 + kRelativeSlack - ratio);
        }
        r.indices.push_back(n);
        r.margins.push_back(margin);
    }
    finalize(r);
    return r;
}

BoundCheckReport check_monotonicity(double eps, double lambda, int M) {
    const Params p(eps, lambda);
    const int window_end = M - kNormalizationWindow - 1;
    if (window_end < 3) {
        throw ConfigError("monotonicity check needs M > 104");
    }
    const auto sol = compute_subordinate(p, M, window_end + 1);
    auto r = make_report(BoundId::monotone_decay, p, window_end);
    r.seed_index = M + 1;
    for (int n = 1; n <= window_end; ++n) {
        double margin = -1.0;
        if (sol.w.sign(n) > 0 && sol.w.sign(n + 1) > 0) {
            margin = -std::expm1(sol.w.log_abs(n + 1) - sol.w.log_abs(n));
            if (margin == 0.0) {
                margin = -1.0;
            }
        }
        r.indices.push_back(n);
        r.margins.push_back(margin);
    }
    finalize(r);
    const int onset = std::max(1, static_cast<int>(std::ceil(2.0 * lambda)));
    r.pass = r.pass && r.N_emp <= onset;
    return r;
}

BoundCheckReport check_lambda_monotonicity(double eps, double lambda, int M, double dlambda) {
    const Params p(eps, lambda);
    if (!(dlambda > 0.0)) {
        throw ConfigError("lambda monotonicity needs dlambda > 0");
    }
    const Params q = p.with_lambda(lambda + dlambda);
    const int window_end = M - kNormalizationWindow - 1;
    const int start = std::max(1, static_cast<int>(std::ceil(q.lambda())));
    if (window_end <= start) {
        throw ConfigError("lambda monotonicity window is empty");
    }
    const auto wl = compute_subordinate(p, M, window_end);
    const auto wm = compute_subordinate(q, M, window_end);
    const int ratio_from = std::max(2, static_cast<int>(std::ceil(2.0 * q.lambda())));
    auto r = make_report(BoundId::lambda_monotone, p, window_end);
    r.seed_index = M + 1;
    for (int n = start; n <= window_end; ++n) {
        double margin = -1.0;
        if (wl.w.sign(n) > 0 && wm.w.sign(n) > 0) {
            // log(w_lambda / w_mu) must lie in [0, log p_n].
            const double d = wl.w.log_abs(n) - wm.w.log_abs(n);
            margin = d + kRelativeSlack;
            if (n >= ratio_from) {
                const double log_p = std::log1p(dlambda) + 2.0 * dlambda / (eps * (n - 1));
                margin = std::min(margin, log_p - d);
            }
        }
        r.indices.push_back(n);
        r.margins.push_back(margin);
    }
    finalize(r);
    r.detail = "lambda'=" + std::to_string(q.lambda());
    return r;
}

BoundCheckReport check_supercritical_regime(double eps, double lambda, int window_end) {
    if (!(eps > 2.0) || !std::isfinite(eps)) {
        throw ConfigError("supercritical regime check needs eps > 2");
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ConfigError("lambda must be finite and >= 0");
    }
    const Params p = Params::unchecked(eps, lambda);
    const double a = p.exponents().a;
    const int N = static_cast<int>(std::ceil(lambda)) + 3;
    if (window_end < 8 * N) {
        throw ConfigError("supercritical window too short");
    }
    const auto u = growth_run(p, N - 2, 0.0, 1.0, window_end);
    const auto v = growth_run(p, N - 2, 1.0, 0.0, window_end);
    const double threshold = 0.5 * (1.0 + std::exp2(2.0 * a + 1.0));

    auto r = make_report(BoundId::supercritical_decay, p, window_end);
    r.seed_index = N;
    int lo = 1;
    while (lo < N) {
        lo *= 2;
    }
    const auto block = [&](const ScaledSequence& x, int from, int to) {
        // Sum relative to 2^(2 exponent), returned as a log.
        double s = 0.0;
        for (int n = from; n < to; ++n) {
            s += x.mantissa(n) * x.mantissa(n);
        }
        return std::log(s) + 2.0 * static_cast<double>(x.exponent()) * std::numbers::ln2;
    };
    while (4 * lo <= window_end + 1) {
        double margin = 1.0;
        for (const auto* x : {&u, &v}) {
            const double ratio = std::exp(block(*x, 2 * lo, 4 * lo) - block(*x, lo, 2 * lo));
            margin = std::min(margin, threshold - ratio);
        }
        r.indices.push_back(lo);
        r.margins.push_back(margin);
        lo *= 2;
    }
    finalize(r);
    return r;
}

BoundCheckReport check_positive_spectrum(double eps, const std::vector<double>& lambdas,
                                         const std::vector<int>& Ms) {
    require_subcritical(eps);
    if (lambdas.empty() || Ms.empty()) {
        throw ConfigError("positive spectrum check needs lambdas and cutoffs");
    }
    auto r = make_report(BoundId::positive_spectrum, Params(eps, lambdas.front()), 0);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        int sign = 0;
        bool stable = true;
        for (int M : Ms) {
            const auto f = evaluate_f(eps, lambdas[i], M);
            if (f.sign == 0 || (sign != 0 && f.sign != sign)) {
                stable = false;
            }
            sign = f.sign;
        }
        r.indices.push_back(static_cast<int>(i));
        r.margins.push_back(stable ? 1.0 : -1.0);
    }
    r.window_end = static_cast<int>(lambdas.size()) - 1;
    finalize(r);
    r.pass = r.pass && r.N_emp == 0;
    return r;
}

std::vector<BoundCheckReport> run_bound_suite(unsigned threads) {
    using Job = std::function<std::vector<BoundCheckReport>()>;
    const auto one = [](auto f) { return Job([f] { return std::vector<BoundCheckReport>{f()}; }); };
    std::vector<Job> jobs{
        [] { return check_growth_envelope(0.1, 0.0, 0.5, 2000); },
        [] { return check_growth_envelope(0.1, 14.9478, 0.5, 2000); },
        one([] { return check_subordinate_envelope(0.1, 0.0, 4000, 1000); }),
        one([] { return check_subordinate_envelope(1.0, 4.3159, 8000, 4000); }),
        one([] { return check_monotonicity(0.1, 14.9478, 4000); }),
        one([] { return check_monotonicity(0.1, 0.0, 4000); }),
        one([] { return check_lambda_monotonicity(0.1, 1.0, 4000); }),
        one([] { return check_lambda_monotonicity(0.1, 14.9478, 4000); }),
        one([] { return check_supercritical_regime(4.0, 0.5, 5000); }),
        one([] { return check_supercritical_regime(4.0, 0.0, 5000); }),
    };
    for (double eps : {0.1, 0.5, 1.0, 1.9}) {
        jobs.push_back(one([eps] { return check_positive_spectrum(eps, {0.0, 0.5, 1.0}, {4000, 8000}); }));
    }
    std::vector<std::vector<BoundCheckReport>> results(jobs.size());
    parallel_for(jobs.size(), threads, [&](std::size_t i) { results[i] = jobs[i](); });
    std::vector<BoundCheckReport> out;
    for (auto& group : results) {
        for (auto& r : group) {
            out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace filmspec
