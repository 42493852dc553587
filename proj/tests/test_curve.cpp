#include "nearcurve/curve.hpp"
#include "nearcurve/rational.hpp"

#include <doctest.h>

#include <cmath>

using namespace nearcurve;

TEST_CASE("extended evaluation: interior and quadratic jet") {
    Curve c = builtin("parabola");
    CHECK(eval_extended(c, 1.5) == doctest::Approx(2.25).epsilon(1e-15));
    // the quadratic jet of a quadratic reproduces it exactly
    CHECK(eval_extended(c, 3.0) == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(eval_extended(c, -2.0) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("extended evaluation: exp seam derivatives match e") {
    Curve c = builtin("exp");
    const double e1 = std::exp(1.0);
    double h = 1e-6;
    // one-sided finite differences across the right seam
    double d1 = (eval_extended(c, 1.0 + h) - eval_extended(c, 1.0)) / h;
    CHECK(d1 == doctest::Approx(e1).epsilon(1e-5));
    // wider step for the second difference to stay above rounding noise
    double h2 = 1e-5;
    double d2 = (eval_extended(c, 1.0 + 2 * h2) - 2 * eval_extended(c, 1.0 + h2) +
                 eval_extended(c, 1.0)) /
                (h2 * h2);
    CHECK(d2 == doctest::Approx(e1).epsilon(1e-4));
}

TEST_CASE("extended second derivative is frozen outside the interval") {
    Curve p = builtin("parabola");
    CHECK(eval_extended_d2(p, 5.0) == 2.0);
    Curve e = builtin("exp");
    CHECK(eval_extended_d2(e, -1.0) == 1.0);  // f''(0)
    CHECK(eval_extended_d1(e, 0.5) == doctest::Approx(std::exp(0.5)).epsilon(1e-12));
    for (double t : {0.1, 1.0, 7.5}) {
        CHECK(eval_extended_d2(e, 1.0 + t) == e.f2(1.0));
        CHECK(eval_extended_d2(e, 0.0 - t) == e.f2(0.0));
    }
}

TEST_CASE("seam continuity against the interior Taylor jet") {
    const double h = 1e-7;
    for (const auto& name : builtin_names()) {
        Curve c = builtin(name);
        for (double p : {c.eta, c.xi}) {
            for (double s : {-h, h}) {
                double jet = c.f(p) + s * c.f1(p) + 0.5 * s * s * c.f2(p);
                double scale = std::max(1.0, std::fabs(c.f(p)));
                CHECK(std::fabs(eval_extended(c, p + s) - jet) <= 1e-10 * scale);
            }
        }
    }
}

TEST_CASE("Hoelder constant estimate") {
    Curve p = builtin("parabola");
    CHECK(estimate_lip(p, 0.5, 1000) == 0.0);  // constant f''
    Curve e = builtin("exp");
    double le = estimate_lip(e, 1.0, 1000);
    CHECK(le >= 2.6);
    CHECK(le <= std::exp(1.0) + 1e-9);
    Curve c = builtin("cubic");
    CHECK(estimate_lip(c, 1.0, 1000) == doctest::Approx(6.0).epsilon(0.01 / 6.0));
    // max over the first n stream points is non-decreasing in n
    double a = estimate_lip(e, 1.0, 100), b = estimate_lip(e, 1.0, 1000),
           d = estimate_lip(e, 1.0, 5000);
    CHECK(a <= b);
    CHECK(b <= d);
    CHECK_THROWS(estimate_lip(e, 0.0, 100));
    CHECK_THROWS(estimate_lip(e, 1.5, 100));
}

TEST_CASE("builtin registry") {
    Curve p = builtin("parabola");
    CHECK(p.eta == 1.0);
    CHECK(p.xi == 2.0);
    CHECK(p.f2_lower == 2.0);
    CHECK(p.has_exact());
    CHECK(p.f(1.5) == 2.25);
    Curve e = builtin("exp");
    CHECK(e.eta == 0.0);
    CHECK(e.xi == 1.0);
    CHECK(e.f2_lower == 1.0);
    CHECK_FALSE(e.has_exact());
    CHECK_THROWS(builtin("nosuch"));
    CHECK(builtin_names().size() == 5);
}

TEST_CASE("polynomial curve construction and validation") {
    std::vector<BigRat> coeffs{BigRat(0), BigRat(0), BigRat(1)};  // x^2
    Curve c = make_poly_curve(coeffs, BigRat(1), BigRat(2), 0.9, "p2");
    CHECK(c.f(1.25) == doctest::Approx(1.5625).epsilon(1e-15));
    CHECK(c.f2_lower > 0.0);
    validate_curve(c);

    // negative control: a wrong first derivative must fail validation
    Curve bad = c;
    bad.f1 = [](double x) { return 3.0 * x; };
    CHECK_THROWS(validate_curve(bad));
}
