#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "filmspec/errors.hpp"
#include "filmspec/params.hpp"
#include "filmspec/recurrence.hpp"
#include "filmspec/scaled_sequence.hpp"

using namespace filmspec;

namespace {
constexpr double kMachineEps = std::numeric_limits<double>::epsilon();
}

TEST_SUITE("recurrence") {

TEST_CASE("params range") {
    CHECK_NOTHROW(Params(0.1, 0.0));
    CHECK_NOTHROW(Params(1.9, 14.95));
    CHECK_THROWS_AS(Params(0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(Params(2.0, 1.0), ConfigError);
    CHECK_THROWS_AS(Params(2.5, 1.0), ConfigError);
    CHECK_THROWS_AS(Params(0.5, -0.1), ConfigError);
    CHECK_THROWS_AS(Params(std::nan(""), 0.0), ConfigError);
    CHECK_THROWS_AS(Params(0.5, std::numeric_limits<double>::infinity()), ConfigError);
    CHECK_NOTHROW(Params::unchecked(4.0, 0.5));
}

TEST_CASE("exponents") {
    const auto e = Params(0.1, 2.0).exponents();
    CHECK(e.a == doctest::Approx(9.0));
    CHECK(e.c == doctest::Approx(11.0));
    CHECK(e.c - e.a == doctest::Approx(2.0));
    CHECK(e.k == doctest::Approx(21.0));
    CHECK(e.h == e.k);
}

TEST_CASE("forward step by substitution") {
    CHECK(forward_step(Params(0.1, 0.0), 2, 1.0, 10.0) == doctest::Approx(67.0).epsilon(1e-15));
    CHECK(forward_step(Params(0.1, 1.0), 2, 1.0, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("backward step by substitution") {
    CHECK(backward_step(Params(0.1, 0.0), 3, 1.0, 1.0) == doctest::Approx(25.0 / 3.0).epsilon(1e-15));
    CHECK(backward_step(Params(0.1, 4.0), 3, 1.0, 1.0) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("shooting residual") {
    CHECK(shooting_residual(Params(0.3, 1.0), 1.0, 0.0) == 0.0);
    CHECK(shooting_residual(Params(0.1, 0.0), 1.0, 10.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(shooting_residual(Params(0.5, 2.0), 1.0, 1.0) == doctest::Approx(1.5));
}

TEST_CASE("steps are linear") {
    const Params p(0.7, 3.25);
    const double alpha = 1.75;
    const double beta = -0.375;
    for (int n = 2; n < 60; ++n) {
        const double x0 = 1.0 / n;
        const double x1 = std::sqrt(static_cast<double>(n));
        const double y0 = -2.0 + n;
        const double y1 = 0.5 * n;
        const double fwd = forward_step(p, n, alpha * x0 + beta * y0, alpha * x1 + beta * y1);
        const double fwd_lin = alpha * forward_step(p, n, x0, x1) + beta * forward_step(p, n, y0, y1);
        const double scale = std::abs(alpha * forward_step(p, n, x0, x1)) + std::abs(beta * forward_step(p, n, y0, y1));
        CHECK(std::abs(fwd - fwd_lin) <= 8 * kMachineEps * scale);
        const double bwd = backward_step(p, n, alpha * x0 + beta * y0, alpha * x1 + beta * y1);
        const double bwd_lin = alpha * backward_step(p, n, x0, x1) + beta * backward_step(p, n, y0, y1);
        const double bscale = std::abs(alpha * backward_step(p, n, x0, x1)) + std::abs(beta * backward_step(p, n, y0, y1));
        CHECK(std::abs(bwd - bwd_lin) <= 8 * kMachineEps * bscale);
    }
}

TEST_CASE("backward triples satisfy the forward recurrence") {
    for (double eps : {0.1, 1.0, 1.9}) {
        for (double lambda : {0.0, 1.5, 14.95}) {
            const Params p(eps, lambda);
            const auto w = backward_run(p, 201, 1.0, 0.9, 1);
            double worst = 0.0;
            for (int n = 2; n <= 200; ++n) {
                const auto v = [&](int k) { return (k % 2 == 0 ? 1.0 : -1.0) * w.value(k); };
                const auto row = recurrence_row(p, n, v(n - 1), v(n), v(n + 1));
                worst = std::max(worst, std::abs(row.residual) / row.largest_term);
            }
            CAPTURE(eps);
            CAPTURE(lambda);
            CHECK(worst <= 1e-10);
        }
    }
}

TEST_CASE("forward run keeps the recurrence across rescales") {
    const Params p(0.01, 0.0);
    const auto v = forward_run(p, 1, 1.0, 1.0 / 0.01, 3000);
    CHECK(v.exponent() > ScaledSequence::kRescaleBits);
    for (int n : {2, 100, 1500, 2999}) {
        const double lp = v.log_abs(n - 1);
        const double lc = v.log_abs(n);
        const double ln = v.log_abs(n + 1);
        // Ratios only, so the huge common scale never materializes.
        const double pred = forward_step(p, n, std::exp(lp - lc), 1.0);
        CHECK(std::exp(ln - lc) == doctest::Approx(pred).epsilon(1e-12));
    }
}

TEST_CASE("operator rows") {
    const std::vector<double> x{1.0, 2.0, 3.0};
    CHECK(apply_operator_row(0.1, x, 1) == doctest::Approx(1.0 - 0.1 * 2.0));
    CHECK(apply_operator_row(0.1, x, 2) == doctest::Approx(0.1 * 1.0 + 4.0 - 0.3 * 3.0));
    CHECK(apply_operator_row(0.1, x, 3) == doctest::Approx(0.3 * 2.0 + 9.0));
    CHECK(apply_transpose_row(0.1, x, 1) == doctest::Approx(1.0 + 0.1 * 2.0));
    CHECK(apply_transpose_row(0.1, x, 2) == doctest::Approx(-0.1 * 1.0 + 4.0 + 0.3 * 3.0));
}

TEST_CASE("scaled sequence rescale preserves signs and ratios") {
    std::vector<double> m{3.0, -1e-100, 7e150, -2.5, 0.0};
    ScaledSequence s(4, m, 17);
    CHECK(s.first_index() == 4);
    CHECK(s.last_index() == 8);
    const double top = std::abs(s.mantissa(6));
    CHECK(top >= 1.0);
    CHECK(top < 2.0);
    for (int i = 0; i < 5; ++i) {
        const int n = 4 + i;
        CHECK(s.sign(n) == (m[i] > 0 ? 1 : (m[i] < 0 ? -1 : 0)));
        if (m[i] != 0.0) {
            CHECK(s.log_abs(n) == doctest::Approx(std::log(std::abs(m[i])) + 17 * std::log(2.0)).epsilon(1e-14));
        }
    }
    CHECK(s.mantissa(4) / s.mantissa(7) == doctest::Approx(3.0 / -2.5).epsilon(4 * kMachineEps));

    auto z = ScaledSequence::zeros(1, 3);
    z.rescale();
    CHECK(z.exponent() == 0);
    CHECK(z.log_scale() == 0.0);
}

TEST_CASE("scale_by_log") {
    ScaledSequence s(1, {1.0, 2.0, 4.0});
    s.scale_by_log(-1000.0);
    CHECK(s.log_abs(3) == doctest::Approx(std::log(4.0) - 1000.0).epsilon(1e-14));
    CHECK(s.value(3) == 0.0);
    CHECK(s.mantissa(1) / s.mantissa(2) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("recurrence window renormalizes exactly") {
    RecurrenceWindow w{std::ldexp(1.0, 600), std::ldexp(3.0, 600), 0};
    const auto shift = w.renormalize();
    CHECK(shift != 0);
    CHECK(w.newer / w.older == 3.0);
    CHECK(std::log2(w.newer) + static_cast<double>(w.exponent) == doctest::Approx(600 + std::log2(3.0)));
}

}
