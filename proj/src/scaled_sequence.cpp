#include "filmspec/scaled_sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "filmspec/errors.hpp"

namespace filmspec {
namespace {

// Exponent e with |x| in [2^e, 2^(e+1)); x must be finite and nonzero.
int binary_order(double x) {
    return std::ilogb(x);
}

}  // namespace

ScaledSequence::ScaledSequence(int first_index, std::vector<double> mantissas, std::int64_t exponent)
    : first_(first_index), mant_(std::move(mantissas)), exp2_(exponent) {
    rescale();
}

ScaledSequence ScaledSequence::zeros(int first_index, int last_index) {
    ScaledSequence s;
    s.first_ = first_index;
    s.mant_.assign(static_cast<std::size_t>(std::max(0, last_index - first_index + 1)), 0.0);
    return s;
}

double ScaledSequence::log_scale() const noexcept {
    return static_cast<double>(exp2_) * std::numbers::ln2;
}

std::size_t ScaledSequence::offset(int n) const {
    if (!contains(n)) {
        throw ConfigError("index " + std::to_string(n) + " outside sequence range [" +
                          std::to_string(first_) + ", " + std::to_string(last_index()) + "]");
    }
    return static_cast<std::size_t>(n - first_);
}

double ScaledSequence::mantissa(int n) const { return mant_[offset(n)]; }

void ScaledSequence::set_mantissa(int n, double m) { mant_[offset(n)] = m; }

double ScaledSequence::value(int n) const {
    const double m = mantissa(n);
    if (m == 0.0) {
        return 0.0;
    }
    const std::int64_t e = std::clamp<std::int64_t>(exp2_, -4000, 4000);
    return std::ldexp(m, static_cast<int>(e));
}

double ScaledSequence::log_abs(int n) const {
    const double m = mantissa(n);
    if (m == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log(std::abs(m)) + log_scale();
}

int ScaledSequence::sign(int n) const {
    const double m = mantissa(n);
    return (m > 0.0) - (m < 0.0);
}

void ScaledSequence::rescale() {
    double peak = 0.0;
    for (double m : mant_) {
        peak = std::max(peak, std::abs(m));
    }
    if (peak == 0.0) {
        exp2_ = 0;
        return;
    }
    shift_exponent(binary_order(peak));
}

void ScaledSequence::shift_exponent(std::int64_t shift) {
    if (shift == 0) {
        return;
    }
    for (double& m : mant_) {
        m = std::ldexp(m, static_cast<int>(-shift));
    }
    exp2_ += shift;
}

void ScaledSequence::scale_by_log(double log_factor) {
    const double in_bits = log_factor / std::numbers::ln2;
    const double whole = std::floor(in_bits);
    const double frac = std::exp((in_bits - whole) * std::numbers::ln2);
    for (double& m : mant_) {
        m *= frac;
    }
    exp2_ += static_cast<std::int64_t>(whole);
    rescale();
}

ScaledSequence ScaledSequence::slice(int first, int last) const {
    offset(first);
    offset(last);
    ScaledSequence s;
    s.first_ = first;
    s.mant_.assign(mant_.begin() + static_cast<std::ptrdiff_t>(first - first_),
                   mant_.begin() + static_cast<std::ptrdiff_t>(last - first_ + 1));
    s.exp2_ = exp2_;
    return s;
}

std::vector<double> ScaledSequence::values() const {
    std::vector<double> out(mant_.size());
    for (int n = first_; n <= last_index(); ++n) {
        out[static_cast<std::size_t>(n - first_)] = value(n);
    }
    return out;
}

std::int64_t RecurrenceWindow::renormalize() {
    const double peak = std::max(std::abs(older), std::abs(newer));
    if (peak == 0.0 || !std::isfinite(peak)) {
        return 0;
    }
    const int order = binary_order(peak);
    if (order < ScaledSequence::kRescaleBits && order > -ScaledSequence::kRescaleBits) {
        return 0;
    }
    older = std::ldexp(older, -order);
    newer = std::ldexp(newer, -order);
    exponent += order;
    return order;
}

}  // namespace filmspec
