#pragma once

namespace filmspec {

/// Growth and decay exponents of the two solution branches of the recurrence.
///
/// A generic solution grows like n^a, the subordinate one decays like n^-c.
/// k and h are the 1/n correction coefficients of the growth and decay
/// envelopes; they coincide.
struct Exponents {
    double a;
    double c;
    double k;
    double h;
};

/// Problem parameters: film parameter epsilon in (0, 2) and spectral
/// parameter lambda >= 0.
class Params {
public:
    /// Validating constructor. Throws ConfigError outside 0 < eps < 2,
    /// lambda >= 0.
    Params(double epsilon, double lambda);

    /// Diagnostic constructor that accepts any eps > 0. Used only by the
    /// supercritical (eps > 2) checks, where every solution is square summable.
    static Params unchecked(double epsilon, double lambda);

    double epsilon() const noexcept { return epsilon_; }
    double lambda() const noexcept { return lambda_; }
    Exponents exponents() const noexcept;

    Params with_lambda(double lambda) const;

private:
    struct Unchecked {};
    Params(double epsilon, double lambda, Unchecked) noexcept
        : epsilon_(epsilon), lambda_(lambda) {}

    double epsilon_;
    double lambda_;
};

/// Throws ConfigError unless 0 < eps < 2.
void require_subcritical(double epsilon);

}  // namespace filmspec
