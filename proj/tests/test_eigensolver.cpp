#include <doctest.h>

#include <cmath>
#include <vector>

#include "filmspec/eigensolver.hpp"
#include "filmspec/errors.hpp"

using namespace filmspec;

namespace {
const std::vector<double> kReferenceEps01{1.00968, 2.07334, 3.22978, 4.50134, 5.89993,
                                  7.43194, 9.10097, 10.9092, 12.8578, 14.9478};
const std::vector<double> kReferenceEps1{1.4485, 4.3159, 8.6219, 14.3638, 21.5414};
}  // namespace

TEST_SUITE("eigensolver") {

TEST_CASE("zero is not an eigenvalue") {
    CHECK(evaluate_f(0.1, 0.0, 4000).sign != 0);
}

TEST_CASE("sign change across the first eigenvalue") {
    const auto a = evaluate_f(0.1, 1.00968 - 1e-3, 4000);
    const auto b = evaluate_f(0.1, 1.00968 + 1e-3, 4000);
    CHECK(a.sign * b.sign == -1);
}

TEST_CASE("evaluation is deterministic") {
    const auto a = evaluate_shooting(0.1, 37.3, 4000);
    const auto b = evaluate_shooting(0.1, 37.3, 4000);
    CHECK(a.f.sign == b.f.sign);
    CHECK(a.f.log_abs == b.f.log_abs);
    CHECK(a.match_index == b.match_index);
}

TEST_CASE("match index does not change the sign where binary64 suffices") {
    for (double lambda : {1.3, 2.5, 6.2, 11.0}) {
        const int s = shooting_function_at(0.1, lambda, 4000, 1).sign;
        for (int j : {2, 5, 9}) {
            CHECK(shooting_function_at(0.1, lambda, 4000, j).sign == s);
        }
    }
}

TEST_CASE("wider types agree where binary64 is well conditioned") {
    for (double lambda : {1.5, 8.0}) {
        const auto d = evaluate_shooting(0.1, lambda, 4000, Precision::binary64);
        const auto q = evaluate_shooting(0.1, lambda, 4000, Precision::binary128);
        CHECK(d.f.sign == q.f.sign);
        CHECK(d.f.log_abs == doctest::Approx(q.f.log_abs).epsilon(1e-9));
        INFO("lambda " << lambda);
        CHECK(d.error_estimate < kShootingTolerance);
    }
}

TEST_CASE("automatic precision widens when the Casoratian is ill conditioned") {
    const auto d = evaluate_shooting(0.1, 43.7, 4000, Precision::binary64);
    CHECK(d.error_estimate > kShootingTolerance);
    const auto a = evaluate_shooting(0.1, 43.7, 4000);
    CHECK(a.precision != Precision::binary64);
    CHECK(a.error_estimate <= kShootingTolerance);
}

TEST_CASE("scan grid") {
    const auto g = scan_grid(0.0, 1.0, 0.3);
    REQUIRE(g.size() == 5);
    CHECK(g.back() == 1.0);
    CHECK(g[1] == doctest::Approx(0.3));
    CHECK_THROWS_AS(scan_grid(1.0, 0.0, 0.1), ConfigError);
    CHECK_THROWS_AS(scan_grid(0.0, 1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(scan_grid(-1.0, 1.0, 0.1), ConfigError);
}

TEST_CASE("scan brackets on [0, 4] and [0, 1]") {
    const auto b = scan_brackets(0.1, 0.0, 4.0, 0.01, 4000);
    REQUIRE(b.size() == 3);
    CHECK(b[0].lo < 1.0097);
    CHECK(b[0].hi > 1.0097);
    CHECK(b[1].lo < 2.0733);
    CHECK(b[1].hi > 2.0733);
    CHECK(b[2].lo < 3.2298);
    CHECK(b[2].hi > 3.2298);
    CHECK(scan_brackets(0.1, 0.0, 1.0, 0.01, 4000).empty());
    CHECK(scan_brackets(1.0, 0.0, 25.0, 0.02, 4000).size() == 5);
}

TEST_CASE("threads do not change scan output") {
    const auto a = scan(0.1, 0.0, 6.0, 0.01, 4000, 1);
    const auto b = scan(0.1, 0.0, 6.0, 0.01, 4000, 3);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].f.sign == b.points[i].f.sign);
        CHECK(a.points[i].f.log_abs == b.points[i].f.log_abs);
    }
    CHECK(a.brackets.size() == b.brackets.size());
}

TEST_CASE("refine root") {
    const auto r = refine_root(0.1, Bracket{1.0, 1.02}, 4000, 1e-8);
    CHECK(r.lambda == doctest::Approx(1.00968).epsilon(1e-5));
    CHECK(r.bracket.width() <= 1e-8);
    CHECK(r.bracket.lo <= r.lambda);
    CHECK(r.lambda <= r.bracket.hi);
    const auto s = refine_root(0.1, Bracket{14.9, 15.0}, 4000, 1e-8);
    CHECK(std::abs(s.lambda - 14.9478) <= 1e-4);
    CHECK_THROWS_AS(refine_root(0.1, Bracket{0.5, 0.9}, 4000, 1e-8), BracketError);
}

TEST_CASE("reference eigenvalues at eps=0.1") {
    const auto recs = compute_spectrum(0.1, 10, 4000, 1e-8);
    REQUIRE(recs.size() == 10);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CAPTURE(i);
        CHECK(recs[i].index == static_cast<int>(i) + 1);
        CHECK(std::abs(recs[i].lambda / kReferenceEps01[i] - 1.0) <= 1e-4);
        CHECK(recs[i].lambda > 1.0);
        if (i > 0) {
            CHECK(recs[i].lambda > recs[i - 1].lambda);
        }
    }
}

TEST_CASE("higher eigenvalues at eps=0.1") {
    const auto recs = compute_spectrum(0.1, 20, 4000, 1e-8);
    REQUIRE(recs.size() == 20);
    CHECK(std::abs(recs[14].lambda - 27.5331) <= 1e-3);
    // Extended-precision bracket from the oracle suite.
    CHECK(recs[19].lambda > 43.6928);
    CHECK(recs[19].lambda < 43.6948);
}

TEST_CASE("reference eigenvalues at eps=1") {
    const auto recs = compute_spectrum(1.0, 5, 4000, 1e-8);
    REQUIRE(recs.size() == 5);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(std::abs(recs[i].lambda / kReferenceEps1[i] - 1.0) <= 1e-3);
    }
}

TEST_CASE("halving the step keeps every root") {
    SpectrumOptions coarse;
    coarse.step = 0.02;
    SpectrumOptions fine;
    fine.step = 0.01;
    const auto a = compute_spectrum(0.1, 6, 4000, 1e-9, coarse);
    const auto b = compute_spectrum(0.1, 6, 4000, 1e-9, fine);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(a[i].lambda - b[i].lambda) <= 1e-9);
    }
}

TEST_CASE("cutoff independence for the first ten") {
    const auto a = compute_spectrum(0.1, 10, 4000, 1e-10);
    const auto b = compute_spectrum(0.1, 10, 8000, 1e-10);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(a[i].lambda - b[i].lambda) <= 1e-6);
    }
}

TEST_CASE("insufficient range") {
    SpectrumOptions o;
    o.max_lambda = 5.0;
    CHECK_THROWS_AS(compute_spectrum(0.1, 10, 4000, 1e-8, o), InsufficientRange);
    CHECK_THROWS_AS(compute_spectrum(0.1, 0, 4000, 1e-8), ConfigError);
    CHECK_THROWS_AS(evaluate_f(0.1, 1.0, 500), ConfigError);
}

TEST_CASE("power law fit") {
    std::vector<EigenvalueRecord> recs;
    for (int n = 1; n <= 6; ++n) {
        EigenvalueRecord r;
        r.index = n;
        r.lambda = 2.0 * std::pow(n, 1.5);
        recs.push_back(r);
    }
    const auto fit = fit_power_law(recs);
    CHECK(fit.alpha == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(fit.gamma == doctest::Approx(1.5).epsilon(1e-10));
    recs.resize(2);
    CHECK_THROWS_AS(fit_power_law(recs), ConfigError);
}

}
