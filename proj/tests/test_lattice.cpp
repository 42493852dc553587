#include "nearcurve/lattice.hpp"
#include "nearcurve/curve.hpp"
#include "nearcurve/util.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace nearcurve;

namespace {

long long brute_count(const Curve& c, double Q, double delta, CountMode mode) {
    long long qlo = mode == CountMode::Full ? 1 : (long long)std::floor(Q) + 1;
    long long qhi = mode == CountMode::Full ? (long long)std::floor(Q)
                                            : (long long)std::floor(2.0 * Q);
    long long n = 0;
    for (long long q = qlo; q <= qhi; ++q)
        for (long long a = (long long)std::floor(c.eta * q) + 1;
             a <= (long long)std::floor(c.xi * q); ++a) {
            double v = (double)q * c.f((double)a / (double)q);
            double d = dist_to_int(v);
            if (std::fabs(d - delta) <= 1e-9 * std::max(1.0, std::fabs(v))) {
                // ties (e.g. dist exactly a short rational) are decided in
                // exact arithmetic against the double value of delta when the
                // curve is polynomial, in extended precision otherwise
                if (c.has_exact()) {
                    BigRat x = BigRat(a) / q;
                    BigRat val = 0;
                    for (size_t i = c.exact_form.size(); i-- > 0;)
                        val = val * x + c.exact_form[i];
                    val *= q;
                    BigRat near = BigRat(rat_floor(val + BigRat(1, 2)));
                    BigRat dr = val >= near ? val - near : near - val;
                    if (dr < rational_from_double(delta)) ++n;
                } else {
                    long double vl =
                        (long double)q * c.f_ld((long double)a / (long double)q);
                    if (dist_to_int_ld(vl) < (long double)delta) ++n;
                }
            } else if (d < delta) {
                ++n;
            }
        }
    return n;
}

CountQuery mk(double Q, double delta, CountMode mode = CountMode::Full) {
    CountQuery q;
    q.Q = Q;
    q.delta = delta;
    q.mode = mode;
    return q;
}

}  // namespace

TEST_CASE("distance to the nearest integer") {
    CHECK(dist_to_int(0.5) == 0.5);
    CHECK(dist_to_int(2.3) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(dist_to_int(-1.2) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(dist_to_int(7.0) == 0.0);
    CHECK_THROWS(dist_to_int(std::numeric_limits<double>::infinity()));
    CHECK_THROWS(dist_to_int(std::nan("")));
}

TEST_CASE("hand-checked counts") {
    Curve c = builtin("parabola");
    CHECK(count(c, mk(2.0, 0.3)).count == 2);  // pairs (2,1) and (4,2)
    CHECK(count(c, mk(1.0, 0.3, CountMode::DyadicBlock)).count == 1);  // pair (4,2)
    // q e^{a/q} is never an integer, so a tiny neighborhood is empty
    CHECK(count(builtin("exp"), mk(3.0, 1e-12)).count == 0);
}

TEST_CASE("counts match independent brute-force enumeration") {
    for (const char* name : {"parabola", "cubic", "exp", "sqrt", "circle-arc"}) {
        Curve c = builtin(name);
        for (double Q : {7.0, 30.0, 101.5}) {
            for (double d : {0.07, 0.24, 0.41}) {
                CHECK(count(c, mk(Q, d)).count == brute_count(c, Q, d, CountMode::Full));
                CHECK(count(c, mk(Q, d, CountMode::DyadicBlock)).count ==
                      brute_count(c, Q, d, CountMode::DyadicBlock));
            }
        }
    }
}

TEST_CASE("exact-rational oracle") {
    Curve p = builtin("parabola");
    CountQuery q = mk(2.0, 0.3);
    q.delta_exact = BigRat(3) / 10;
    CHECK(count_exact(p, q).count == 2);
    CHECK(count_exact(p, mk(1024.0, 0.1)).count == count(p, mk(1024.0, 0.1)).count);
    Curve c = builtin("cubic");
    CHECK(count_exact(c, mk(256.0, 0.25)).count == count(c, mk(256.0, 0.25)).count);
    Curve e = builtin("exp");
    CHECK_THROWS(count_exact(e, mk(10.0, 0.1)));
}

TEST_CASE("dyadic decomposition identity") {
    Curve c = builtin("parabola");
    DyadicResult d = dyadic_sum(c, 2.0, 0.3);
    REQUIRE(d.blocks.size() == 3);
    CHECK(d.blocks[0] == 1);
    CHECK(d.blocks[1] == 1);
    CHECK(d.blocks[2] == 0);
    CHECK(d.total == 2);
    CHECK(d.total == count(c, mk(2.0, 0.3)).count);

    CHECK(dyadic_sum(c, 512.0, 0.05).total == count(c, mk(512.0, 0.05)).count);
    CHECK(dyadic_sum(builtin("exp"), 300.0, 0.12).total ==
          count(builtin("exp"), mk(300.0, 0.12)).count);
    CHECK(dyadic_sum(c, 0.9, 0.1).total == 0);
}

TEST_CASE("monotonicity in delta and Q") {
    Curve c = builtin("cubic");
    long long prev = -1;
    for (double d : {0.05, 0.1, 0.2, 0.4}) {
        long long n = count(c, mk(100.0, d)).count;
        CHECK(n >= prev);
        prev = n;
    }
    prev = -1;
    for (double Q : {10.0, 50.0, 100.0, 200.0}) {
        long long n = count(c, mk(Q, 0.2)).count;
        CHECK(n >= prev);
        prev = n;
    }
}

TEST_CASE("per-denominator additivity and a-range") {
    Curve c = builtin("parabola");
    CountResult r = count(c, mk(150.0, 0.2), 1, true);
    long long s = 0;
    for (auto& [q, n] : r.per_q) s += n;
    CHECK(s == r.count);
    CHECK(r.per_q.size() == 150);

    auto [amin, amax] = a_range(c, 7);  // eta q < a <= xi q with (1,2]
    CHECK(amin == 8);
    CHECK(amax == 14);
}

TEST_CASE("integer-shift invariance f -> f + nx + m") {
    // || q f(a/q) + n a + m q || = || q f(a/q) ||, so counts are identical.
    std::vector<BigRat> base{BigRat(0), BigRat(0), BigRat(1)};
    std::vector<BigRat> shifted{BigRat(2), BigRat(3), BigRat(1)};  // x^2 + 3x + 2
    Curve c0 = make_poly_curve(base, BigRat(1), BigRat(2), 0.9, "x2");
    Curve c1 = make_poly_curve(shifted, BigRat(1), BigRat(2), 0.9, "x2s");
    for (double d : {0.11, 0.33}) {
        CountQuery q = mk(200.0, d);
        CHECK(count_exact(c0, q).count == count_exact(c1, q).count);
        CHECK(count(c0, q).count == count(c1, q).count);
    }
}

TEST_CASE("parallel determinism") {
    Curve c = builtin("sqrt");
    for (auto mode : {CountMode::Full, CountMode::DyadicBlock}) {
        CountQuery q = mk(400.0, 0.17, mode);
        CountResult r1 = count(c, q, 1);
        CountResult r4 = count(c, q, 4);
        CHECK(r1.count == r4.count);
        CHECK(r1.boundary_hits == r4.boundary_hits);
    }
}

TEST_CASE("mode names round-trip") {
    CHECK(mode_from_name("full") == CountMode::Full);
    CHECK(mode_from_name("tilde") == CountMode::DyadicBlock);
    CHECK(mode_from_name(mode_name(CountMode::Full)) == CountMode::Full);
    CHECK_THROWS(mode_from_name("bogus"));
}
