#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "filmspec/eigensolver.hpp"
#include "filmspec/errors.hpp"
#include "filmspec/truncation.hpp"
#include "rational_oracle.hpp"

using namespace filmspec;

TEST_SUITE("truncation") {

TEST_CASE("matrix entries") {
    const auto m = build_truncated_matrix(0.1, 3);
    CHECK(m.diag == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(m.sub[0] == doctest::Approx(0.1));
    CHECK(m.sub[1] == doctest::Approx(0.3));
    CHECK(m.super[0] == doctest::Approx(-0.1));
    CHECK(m.super[1] == doctest::Approx(-0.3));
    const auto a = m.dense();
    CHECK(a(1, 0) == m.sub[0]);
    CHECK(a(0, 1) == m.super[0]);
    CHECK(a(0, 2) == 0.0);
    CHECK_THROWS_AS(build_truncated_matrix(0.1, 1), ConfigError);
}

TEST_CASE("sign flip maps the matrix to its transpose") {
    const auto a = build_truncated_matrix(0.37, 9).dense();
    Eigen::VectorXd d(9);
    for (int r = 0; r < 9; ++r) {
        d[r] = (r % 2 == 0) ? -1.0 : 1.0;
    }
    const Eigen::MatrixXd b = d.asDiagonal() * a * d.asDiagonal();
    CHECK((b - a.transpose()).norm() == 0.0);
    const auto ea = dense_eigenvalues(a);
    const auto et = dense_eigenvalues(Eigen::MatrixXd(a.transpose()));
    REQUIRE(ea.size() == et.size());
    for (std::size_t i = 0; i < ea.size(); ++i) {
        CHECK(std::abs(ea[i] - et[i]) <= 1e-10);
    }
}

TEST_CASE("two by two closed form") {
    const auto ev = dense_eigenvalues(build_truncated_matrix(0.1, 2));
    REQUIRE(ev.size() == 2);
    CHECK(std::abs(ev[0] - (3.0 - std::sqrt(0.96)) / 2.0) <= 1e-12);
    CHECK(std::abs(ev[1] - (3.0 + std::sqrt(0.96)) / 2.0) <= 1e-12);
}

TEST_CASE("diagonal matrix") {
    auto m = build_truncated_matrix(0.1, 12);
    std::fill(m.sub.begin(), m.sub.end(), 0.0);
    std::fill(m.super.begin(), m.super.end(), 0.0);
    const auto ev = dense_eigenvalues(m);
    for (int i = 0; i < 12; ++i) {
        CHECK(ev[i] == std::complex<double>(i + 1.0, 0.0));
    }
}

TEST_CASE("real eigenvalues agree with an exact characteristic polynomial") {
    const double eps = 0.1;
    const int N = 60;
    const auto ev = dense_eigenvalues(build_truncated_matrix(eps, N));
    std::vector<double> reals;
    for (const auto& z : ev) {
        if (z.imag() == 0.0) {
            reals.push_back(z.real());
        }
    }
    REQUIRE(!reals.empty());
    std::sort(reals.begin(), reals.end());
    // Cell edges between consecutive computed real eigenvalues; the exact
    // determinant must change sign across every cell holding one of them.
    std::vector<double> edges{reals.front() - 1.0};
    for (std::size_t i = 0; i + 1 < reals.size(); ++i) {
        edges.push_back(0.5 * (reals[i] + reals[i + 1]));
    }
    edges.push_back(reals.back() + 1.0);
    const mpq_class e(eps);
    std::vector<int> signs;
    for (double x : edges) {
        signs.push_back(sgn(oracle::truncated_charpoly(e, N, mpq_class(x))));
    }
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        CAPTURE(reals[i]);
        CHECK(signs[i] * signs[i + 1] == -1);
    }
    // Count parity over the whole range matches too.
    const int total = static_cast<int>(reals.size());
    CHECK((signs.front() * signs.back() == -1) == (total % 2 == 1));
}

TEST_CASE("compare identical lists") {
    std::vector<EigenvalueRecord> recs(3);
    std::vector<std::complex<double>> trunc;
    for (int i = 0; i < 3; ++i) {
        recs[i].index = i + 1;
        recs[i].lambda = 1.5 + i;
        trunc.emplace_back(1.5 + i, 0.0);
    }
    const auto rep = compare_spectra(trunc, recs, 1e-3);
    CHECK(rep.nonreal_count == 0);
    CHECK(rep.all_matched);
    CHECK(rep.agreement_prefix == 3);
    for (const auto& m : rep.matches) {
        CHECK(m.distance == 0.0);
    }
    CHECK_THROWS_AS(compare_spectra({}, recs, 1e-3), ConfigError);
}

TEST_CASE("sweep invariants and degradation") {
    const auto recs = compute_spectrum(0.1, 10, 4000, 1e-10);
    const std::vector<int> sizes{50, 100, 200, 400};
    const auto runs = truncation_sweep(0.1, sizes, recs, 1e-3, 2);
    REQUIRE(runs.size() == 4);
    bool some_unmatched = false;
    for (const auto& r : runs) {
        CAPTURE(r.N);
        CHECK(r.trace_error <= 1e-10);
        CHECK(r.conjugate_pairs);
        CHECK(r.report.nonreal_count > 0);
        some_unmatched = some_unmatched || !r.report.all_matched;
    }
    CHECK(some_unmatched);
    CHECK(!runs[0].report.all_matched);
}

}
