#include "nearcurve/selberg.hpp"
#include "nearcurve/curve.hpp"
#include "nearcurve/lattice.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace nearcurve;

TEST_CASE("zero coefficient equals the exact integral") {
    auto plus = selberg_build(SelbergSign::Majorant, 9, 0.1);
    auto minus = selberg_build(SelbergSign::Minorant, 9, 0.1);
    CHECK(plus.coeff(0).real() == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(minus.coeff(0).real() == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(plus.coeff(0).imag() == 0.0);

    auto small = selberg_build(SelbergSign::Minorant, 10, 0.01);
    CHECK(small.coeff(0).real() == doctest::Approx(0.02 - 1.0 / 11.0).epsilon(1e-14));
}

TEST_CASE("coefficient proximity to the indicator transform") {
    auto p = selberg_build(SelbergSign::Majorant, 100, 0.25);
    double chi1 = std::sin(2.0 * std::numbers::pi * 0.25) / std::numbers::pi;
    CHECK(std::abs(p.coeff(1) - std::complex<double>(chi1)) <= 1.0 / 101.0);
    CHECK(std::abs(p.coeff(-1) - std::complex<double>(chi1)) <= 1.0 / 101.0);
}

TEST_CASE("conjugate symmetry and degree") {
    auto p = selberg_build(SelbergSign::Minorant, 37, 0.2);
    CHECK(p.coeffs.size() == 75);
    for (int k = 1; k <= 37; ++k) {
        CHECK(p.coeff(-k) == std::conj(p.coeff(k)));
        CHECK(p.coeff(k).imag() == 0.0);  // symmetric interval
    }
}

TEST_CASE("pointwise values at the center, outside, and periodicity") {
    for (int K : {5, 40}) {
        for (double d : {0.05, 0.2}) {
            auto plus = selberg_build(SelbergSign::Majorant, K, d);
            auto minus = selberg_build(SelbergSign::Minorant, K, d);
            CHECK(selberg_eval(plus, 0.0) >= 1.0 - 1e-12);
            CHECK(selberg_eval(minus, 0.5) <= 1e-12);
            for (double a : {0.03, 0.41, -0.2}) {
                CHECK(selberg_eval(plus, a) ==
                      doctest::Approx(selberg_eval(plus, a + 1.0)).epsilon(1e-12));
                CHECK(selberg_eval(plus, a) ==
                      doctest::Approx(selberg_eval_fast(plus, a)).epsilon(1e-11));
            }
        }
    }
}

TEST_CASE("verification report on known-good polynomials") {
    auto p = selberg_build(SelbergSign::Majorant, 50, 0.1);
    auto rep = selberg_verify(p, 100000);
    CHECK(rep.ok);
    CHECK(rep.sandwich_ok);
    CHECK(rep.integral_ok);
    CHECK(rep.domination_ok);
    CHECK(rep.proximity_ok);
    CHECK_FALSE(rep.negative_mass);

    auto m = selberg_build(SelbergSign::Minorant, 10, 0.01);
    auto mrep = selberg_verify(m, 100000);
    CHECK(mrep.ok);
    CHECK(mrep.negative_mass);  // 2 delta < 1/(K+1)
}

TEST_CASE("tampered coefficients fail the sandwich (negative control)") {
    auto p = selberg_build(SelbergSign::Majorant, 20, 0.1);
    p.coeffs[20] -= 0.05;  // damage the k=0 coefficient
    auto rep = selberg_verify(p, 10000);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.sandwich_ok);
    CHECK(rep.worst_sandwich_violation > 0.0);
}

TEST_CASE("invalid delta rejected") {
    CHECK_THROWS(selberg_build(SelbergSign::Majorant, 10, 0.0));
    CHECK_THROWS(selberg_build(SelbergSign::Majorant, 10, 0.5));
    CHECK_THROWS(selberg_build(SelbergSign::Majorant, 0, 0.1));
}

TEST_CASE("sandwich sums bracket the true block count") {
    Curve c = builtin("parabola");
    double prev_gap = 0.0;
    for (int K : {16, 64, 256}) {
        auto s = sandwich_counts(c, 64.0, 0.3, K);
        CHECK(s.lower <= (double)s.count + 1e-6);
        CHECK((double)s.count <= s.upper + 1e-6);
        double gap = s.upper - s.lower;
        if (K == 16) prev_gap = gap;
        if (K == 256) CHECK(gap < prev_gap);  // bracket tightens with K
    }
    // near-empty neighborhood still bracketed (exp has no exact integer values)
    auto z = sandwich_counts(builtin("exp"), 32.0, 1e-6, 16);
    CHECK(z.count == 0);
    CHECK(z.lower <= 1e-6);
    CHECK(z.upper >= -1e-6);
}

TEST_CASE("sandwich sums are worker-count independent") {
    Curve c = builtin("cubic");
    auto s1 = sandwich_counts(c, 100.0, 0.2, 32, 1);
    auto s3 = sandwich_counts(c, 100.0, 0.2, 32, 3);
    CHECK(s1.count == s3.count);
    CHECK(s1.lower == doctest::Approx(s3.lower).epsilon(1e-12));
    CHECK(s1.upper == doctest::Approx(s3.upper).epsilon(1e-12));
}
