#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace filmspec {

/// Finite real sequence x_first..x_last stored as mantissas times a shared
/// power of two.
///
/// The true value at index n is mantissa(n) * 2^exponent(). The scale is kept
/// as an integer binary exponent so that rescaling is exact: it never changes
/// a sign or a ratio between entries. log_scale() reports the same factor as
/// a natural logarithm.
class ScaledSequence {
public:
    /// Mantissas are kept inside [2^-kRescaleBits, 2^kRescaleBits].
    static constexpr int kRescaleBits = 512;

    ScaledSequence() = default;
    ScaledSequence(int first_index, std::vector<double> mantissas, std::int64_t exponent = 0);

    /// Zero-filled sequence on first_index..last_index.
    static ScaledSequence zeros(int first_index, int last_index);

    int first_index() const noexcept { return first_; }
    int last_index() const noexcept { return first_ + static_cast<int>(mant_.size()) - 1; }
    std::size_t size() const noexcept { return mant_.size(); }
    bool empty() const noexcept { return mant_.empty(); }
    bool contains(int n) const noexcept { return n >= first_ && n <= last_index(); }

    std::span<const double> mantissas() const noexcept { return mant_; }
    std::int64_t exponent() const noexcept { return exp2_; }
    double log_scale() const noexcept;

    double mantissa(int n) const;
    void set_mantissa(int n, double m);

    /// True value; may under- or overflow for extreme scales.
    double value(int n) const;
    /// ln|x_n|, -infinity for an exact zero.
    double log_abs(int n) const;
    int sign(int n) const;

    /// Bring the largest |mantissa| into [1, 2). A zero sequence gets exponent 0.
    void rescale();
    /// Re-express the same values with exponent increased by `shift`.
    void shift_exponent(std::int64_t shift);
    /// Multiply every value by exp(log_factor).
    void scale_by_log(double log_factor);

    /// Entries first..last as a new sequence sharing this scale.
    ScaledSequence slice(int first, int last) const;

    /// Plain values; entries far below the largest one may flush to zero.
    std::vector<double> values() const;

private:
    std::size_t offset(int n) const;

    int first_ = 1;
    std::vector<double> mant_;
    std::int64_t exp2_ = 0;
};

/// Two consecutive recurrence values sharing one binary exponent; the state
/// carried by forward and backward runs.
struct RecurrenceWindow {
    double older = 0.0;
    double newer = 0.0;
    std::int64_t exponent = 0;

    /// Shift the exponent when the pair leaves the mantissa band. Returns the
    /// applied shift (0 when nothing changed) so callers can keep stored
    /// entries on the same scale.
    std::int64_t renormalize();
};

}  // namespace filmspec
