#include "filmspec/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "filmspec/errors.hpp"
#include "filmspec/parallel.hpp"
#include "filmspec/recurrence.hpp"
#include "shooting_kernel.hpp"

namespace filmspec {
namespace {

constexpr int kMinCutoff = 1000;
// |f| at a suspect minimum must sit this far below both neighbours.
constexpr double kSuspectDepth = 0.25;
constexpr std::size_t kScanBlock = 256;

void append_brackets(std::span<const ScanPoint> pts, std::size_t from, std::vector<Bracket>& out) {
    for (std::size_t j = from; j < pts.size(); ++j) {
        if (pts[j].f.sign == 0) {
            out.push_back({pts[j].lambda, pts[j].lambda});
            continue;
        }
        if (j + 1 < pts.size() && pts[j].f.sign * pts[j + 1].f.sign < 0) {
            out.push_back({pts[j].lambda, pts[j + 1].lambda});
        }
    }
}

}  // namespace

const char* to_string(Precision p) noexcept {
    switch (p) {
        case Precision::binary64: return "binary64";
        case Precision::extended: return "extended";
        case Precision::binary128: return "binary128";
        case Precision::automatic: return "automatic";
    }
    return "unknown";
}

namespace {

Params shooting_params(double eps, double lambda, int M) {
    Params p(eps, lambda);
    if (M < kMinCutoff) {
        throw ConfigError("evaluate_f needs M >= 1000, got " + std::to_string(M));
    }
    if (static_cast<double>(M) < 2.0 * lambda + 10.0) {
        throw ConfigError("cutoff M=" + std::to_string(M) + " too small for lambda=" + std::to_string(lambda));
    }
    return p;
}

ShootingEvaluation run_kernel(const Params& p, int M, Precision precision, int hint) {
    detail::CasoratianResult r;
    switch (precision) {
        case Precision::binary64: r = detail::shooting_kernel<double>(p, M, hint); break;
        case Precision::extended: r = detail::shooting_kernel<long double>(p, M, hint); break;
        case Precision::binary128:
        case Precision::automatic: r = detail::shooting_kernel<detail::quad>(p, M, hint); break;
    }
    return {{r.sign, r.log_abs}, r.match_index, r.error_estimate,
            precision == Precision::automatic ? Precision::binary128 : precision};
}

}  // namespace

ShootingEvaluation evaluate_shooting(double eps, double lambda, int M, Precision precision) {
    const Params p = shooting_params(eps, lambda, M);
    if (precision != Precision::automatic) {
        return run_kernel(p, M, precision, 0);
    }
    const auto narrow = run_kernel(p, M, Precision::binary64, 0);
    if (narrow.error_estimate <= kShootingTolerance) {
        return narrow;
    }
    // Predict whether the 64-bit significand suffices before paying for binary128.
    constexpr double gain = 0x1p-64 / 0x1p-53;
    if (narrow.error_estimate * gain <= 0.1 * kShootingTolerance) {
        const auto mid = run_kernel(p, M, Precision::extended, 0);
        if (mid.error_estimate <= kShootingTolerance) {
            return mid;
        }
    }
    return run_kernel(p, M, Precision::binary128, 0);
}

SignedMagnitude evaluate_f(double eps, double lambda, int M) {
    return evaluate_shooting(eps, lambda, M).f;
}

SignedMagnitude shooting_function_at(double eps, double lambda, int M, int match_index, Precision precision) {
    const Params p = shooting_params(eps, lambda, M);
    if (match_index < 1) {
        throw ConfigError("match index must be >= 1");
    }
    return run_kernel(p, M, precision, match_index).f;
}

double default_scan_step(double eps) { return eps <= 0.2 ? 0.01 : 0.02; }

std::vector<double> scan_grid(double lo, double hi, double step) {
    if (!(lo >= 0.0) || !(hi > lo) || !(step > 0.0) || step > hi - lo || !std::isfinite(hi)) {
        throw ConfigError("scan range needs 0 <= lo < hi and 0 < step <= hi - lo");
    }
    const auto intervals = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9));
    std::vector<double> grid(intervals + 1);
    for (std::size_t j = 0; j <= intervals; ++j) {
        grid[j] = std::min(hi, lo + static_cast<double>(j) * step);
    }
    grid.back() = hi;
    return grid;
}

ScanResult scan(double eps, double lo, double hi, double step, int M, unsigned threads) {
    const auto grid = scan_grid(lo, hi, step);
    ScanResult result;
    result.points.resize(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t j) {
        result.points[j] = {grid[j], evaluate_f(eps, grid[j], M)};
    });
    append_brackets(result.points, 0, result.brackets);

    const auto& pts = result.points;
    for (std::size_t j = 1; j + 1 < pts.size(); ++j) {
        const int s = pts[j].f.sign;
        if (s == 0 || pts[j - 1].f.sign != s || pts[j + 1].f.sign != s) {
            continue;
        }
        const double depth = std::log(kSuspectDepth);
        if (pts[j].f.log_abs - pts[j - 1].f.log_abs < depth && pts[j].f.log_abs - pts[j + 1].f.log_abs < depth) {
            result.suspect_minima.push_back(pts[j].lambda);
        }
    }
    return result;
}

std::vector<Bracket> scan_brackets(double eps, double lo, double hi, double step, int M, unsigned threads) {
    return scan(eps, lo, hi, step, M, threads).brackets;
}

EigenvalueRecord refine_root(double eps, Bracket bracket, int M, double tol) {
    if (!(tol >= 0.0) || !(bracket.hi >= bracket.lo)) {
        throw ConfigError("refine_root needs lo <= hi and tol >= 0");
    }
    EigenvalueRecord rec;
    rec.M = M;
    auto finish = [&](double lo, double hi) {
        rec.bracket = {lo, hi};
        rec.lambda = lo == hi ? lo : lo + 0.5 * (hi - lo);
        rec.residual_sign_gap = hi - lo;
        return rec;
    };

    double lo = bracket.lo;
    double hi = bracket.hi;
    const int s_lo = evaluate_f(eps, lo, M).sign;
    if (s_lo == 0) {
        return finish(lo, lo);
    }
    if (bracket.degenerate()) {
        throw BracketError("degenerate bracket at " + std::to_string(lo) + " is not an exact zero");
    }
    const int s_hi = evaluate_f(eps, hi, M).sign;
    if (s_hi == 0) {
        return finish(hi, hi);
    }
    if (s_lo == s_hi) {
        throw BracketError("f has the same sign at both ends of [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
    }
    while (hi - lo > tol) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const int s_mid = evaluate_f(eps, mid, M).sign;
        if (s_mid == 0) {
            return finish(mid, mid);
        }
        if (s_mid == s_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return finish(lo, hi);
}

std::vector<EigenvalueRecord> compute_spectrum(double eps, int count, int M, double tol,
                                               const SpectrumOptions& options) {
    require_subcritical(eps);
    if (count < 1) {
        throw ConfigError("count must be >= 1");
    }
    if (M < kMinCutoff) {
        throw ConfigError("compute_spectrum needs M >= 1000");
    }
    const double step = options.step > 0.0 ? options.step : default_scan_step(eps);
    const double cap_by_cutoff = (static_cast<double>(M) - 10.0) / 2.0;
    const double cap = options.max_lambda > 0.0 ? std::min(options.max_lambda, cap_by_cutoff) : cap_by_cutoff;

    // Grid points are integer multiples of step so that extending the scan
    // never moves earlier points.
    std::vector<ScanPoint> pts;
    std::vector<Bracket> brackets;
    std::size_t next = 0;
    while (static_cast<int>(brackets.size()) < count) {
        std::vector<double> block;
        for (std::size_t j = next; j < next + kScanBlock; ++j) {
            const double lam = static_cast<double>(j) * step;
            if (lam > cap) {
                break;
            }
            block.push_back(lam);
        }
        if (block.empty()) {
            throw InsufficientRange("found " + std::to_string(brackets.size()) + " of " + std::to_string(count) +
                                    " eigenvalues below lambda = " + std::to_string(cap));
        }
        const std::size_t first_new = pts.size();
        pts.resize(first_new + block.size());
        parallel_for(block.size(), options.threads, [&](std::size_t i) {
            pts[first_new + i] = {block[i], evaluate_f(eps, block[i], M)};
        });
        next += block.size();
        // The pair straddling the previous block boundary is examined now.
        std::vector<Bracket> found;
        append_brackets(std::span<const ScanPoint>(pts).first(pts.size()), first_new == 0 ? 0 : first_new - 1, found);
        for (const auto& b : found) {
            if (brackets.empty() || b.lo > brackets.back().lo) {
                brackets.push_back(b);
            }
        }
    }
    brackets.resize(static_cast<std::size_t>(count));

    std::vector<EigenvalueRecord> records(brackets.size());
    parallel_for(brackets.size(), options.threads, [&](std::size_t i) {
        records[i] = refine_root(eps, brackets[i], M, tol);
        records[i].index = static_cast<int>(i) + 1;
    });
    return records;
}

PowerLaw fit_power_law(std::span<const EigenvalueRecord> records) {
    if (records.size() < 3) {
        throw ConfigError("fit_power_law needs at least 3 records");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& r : records) {
        if (r.index < 1 || !(r.lambda > 0.0)) {
            throw ConfigError("fit_power_law needs positive indices and eigenvalues");
        }
        const double x = std::log(static_cast<double>(r.index));
        const double y = std::log(r.lambda);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(records.size());
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0) {
        throw ConfigError("fit_power_law needs at least two distinct indices");
    }
    const double gamma = (n * sxy - sx * sy) / denom;
    const double log_alpha = (sy - gamma * sx) / n;
    return {std::exp(log_alpha), gamma};
}

}  // namespace filmspec
