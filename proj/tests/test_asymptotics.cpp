#include "nearcurve/asymptotics.hpp"
#include "nearcurve/curve.hpp"

#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <random>

#include "nearcurve/util.hpp"

using namespace nearcurve;
using Float50 = boost::multiprecision::cpp_bin_float_50;

namespace {

RegimeParams params(double theta, double Q, double delta, double eps = 0.05, double c = 1.0) {
    RegimeParams p;
    p.theta = theta;
    p.epsilon = eps;
    p.Q = Q;
    p.delta = delta;
    p.regime_c = c;
    return p;
}

double threshold50(double Q, double theta) {
    Float50 q(Q), t(theta);
    return (pow(q, (1 - 2 * t) / (2 - t)) * pow(log(q), -(5 - t) / (2 - t)))
        .convert_to<double>();
}

}  // namespace

TEST_CASE("main terms") {
    CHECK(main_term(1, 2, 10, 0.1, CountMode::DyadicBlock) == doctest::Approx(30.0));
    CHECK(main_term(1, 2, 10, 0.1, CountMode::Full) == doctest::Approx(10.0));
    CHECK(main_term(1.5, 1.5, 10, 0.1, CountMode::Full) == 0.0);
    // block main term is exactly three times the full one
    for (double Q : {8.0, 100.0})
        CHECK(main_term(0, 1, Q, 0.2, CountMode::DyadicBlock) ==
              doctest::Approx(3.0 * main_term(0, 1, Q, 0.2, CountMode::Full)).epsilon(1e-15));
}

TEST_CASE("signed error term") {
    Curve c = builtin("parabola");
    CHECK(error_term(c, 2.0, 0.3, CountMode::Full) == doctest::Approx(0.8).epsilon(1e-12));
    // q f(a/q) is never an integer here, so the block count vanishes as delta -> 0
    double e = error_term(builtin("exp"), 1.0, 1e-9, CountMode::DyadicBlock);
    CHECK(e < 0.0);
    CHECK(e > -1e-6);
}

TEST_CASE("regime selection") {
    CHECK(regime(params(0.75, 1e4, 0.01)) == Regime::One);
    CHECK(regime(params(0.75, 1e4, 1e-6)) == Regime::Two);
    CHECK(regime(params(0.25, 1e6, 0.49)) == Regime::Two);
    CHECK_THROWS(regime(params(0.75, 1.0, 0.1)));
    // threshold against a 50-digit evaluation
    for (double Q : {1e3, 1e4, 2.5e5})
        for (double th : {0.55, 0.75, 0.95})
            CHECK(regime_threshold(Q, th) ==
                  doctest::Approx(threshold50(Q, th)).epsilon(1e-12));
    CHECK(regime_threshold(1e4, 0.75) == doctest::Approx(1.32e-5).epsilon(0.01));
}

TEST_CASE("K selection") {
    KChoice a = choose_K(params(0.75, 1e4, 0.01));
    CHECK(a.regime == Regime::One);
    CHECK(a.K == 105);
    CHECK(a.delta_K_ok);
    CHECK(a.K_cap_ok);

    KChoice b = choose_K(params(0.75, 1e4, 1e-6));
    CHECK(b.regime == Regime::Two);
    {
        Float50 d("1e-6"), Q("1e4"), t("0.75");
        long long oracle =
            (long long)floor(pow(d, -2 / (5 - t)) * pow(Q, (1 + t) / (5 - t))).convert_to<double>();
        CHECK(b.K == oracle);
    }

    // delta*K <= 1 gets flagged, not silently accepted
    KChoice c = choose_K(params(0.75, 1.5, 0.45));
    CHECK_FALSE(c.delta_K_ok);
}

TEST_CASE("pre-floor K equalizes the named term pair in each regime") {
    // regime one: Q^2/K vs delta K^{1/2} Q^{3/2} log Q
    for (auto [th, Q, d] : std::vector<std::tuple<double, double, double>>{
             {0.75, 1e4, 0.01}, {0.9, 1e5, 0.05}}) {
        double Kf = std::pow(d, -2.0 / 3.0) * std::pow(Q, 1.0 / 3.0) *
                    std::pow(std::log(Q), -2.0 / 3.0);
        double t1 = Q * Q / Kf;
        double t2 = d * std::sqrt(Kf) * std::pow(Q, 1.5) * std::log(Q);
        CHECK(t1 / t2 >= 0.5);
        CHECK(t1 / t2 <= 2.0);
    }
    // regime two: Q^2/K vs delta (K Q)^{(3-theta)/2}
    for (auto [th, Q, d] : std::vector<std::tuple<double, double, double>>{
             {0.75, 1e4, 1e-6}, {0.3, 1e5, 1e-3}}) {
        double Kf = std::pow(d, -2.0 / (5.0 - th)) * std::pow(Q, (1.0 + th) / (5.0 - th));
        double t1 = Q * Q / Kf;
        double t2 = d * std::pow(Kf * Q, (3.0 - th) / 2.0);
        CHECK(t1 / t2 >= 0.5);
        CHECK(t1 / t2 <= 2.0);
    }
}

TEST_CASE("error bound branches") {
    RegimeParams p1 = params(1.0, 1000.0, 0.1);
    REQUIRE(regime(p1) == Regime::One);
    double expect = std::pow(0.1, 2.0 / 3.0) * std::pow(1000.0, 5.0 / 3.0) *
                    std::pow(std::log(1000.0), 2.0 / 3.0);
    CHECK(error_bound(p1) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(expect == doctest::Approx(7.8e4).epsilon(0.02));

    RegimeParams p2 = params(0.5, 1e4, 1e-4);
    REQUIRE(regime(p2) == Regime::Two);
    CHECK(error_bound(p2) ==
          doctest::Approx(std::pow(1e-4, 4.0 / 9.0) * std::pow(1e4, 30.0 / 18.0)).epsilon(1e-12));

    // log Q = 1 collapses the log factor (regime one forced via the multiplier)
    RegimeParams pe = params(1.0, std::exp(1.0), 0.25, 0.05, 0.5);
    REQUIRE(regime(pe) == Regime::One);
    CHECK(error_bound(pe) ==
          doctest::Approx(std::pow(0.25, 2.0 / 3.0) * std::exp(5.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("branch values agree up to log powers at the threshold") {
    for (double Q : {1e3, 1e5})
        for (double th : {0.6, 0.8, 0.95}) {
            double T = regime_threshold(Q, th);
            RegimeParams at = params(th, Q, T);
            double one = error_bound(at);  // delta = T selects regime one
            RegimeParams below = params(th, Q, T, 0.05, 1.0 + 1e-12);
            double two = error_bound(below);
            double r = one / two, L = std::log(Q);
            CHECK(r >= std::pow(L, -4.0));
            CHECK(r <= std::pow(L, 4.0));
        }
}

TEST_CASE("admissible delta window") {
    CHECK(admissible_delta(params(1.0, 1e4, 0.1)));
    CHECK_FALSE(admissible_delta(params(1.0, 1e4, 0.5)));
    CHECK_FALSE(admissible_delta(params(1.0, 1e4, 1e-4)));  // below Q^{-0.95}
    // monotone in delta below 1/2
    std::mt19937_64 rng(kDefaultSeed);
    std::uniform_real_distribution<double> ud(1e-5, 0.499);
    for (int i = 0; i < 50; ++i) {
        double d1 = ud(rng), d2 = ud(rng);
        if (d1 > d2) std::swap(d1, d2);
        RegimeParams lo = params(0.8, 1e4, d1), hi = params(0.8, 1e4, d2);
        if (admissible_delta(lo)) CHECK(admissible_delta(hi));
    }
}

TEST_CASE("bound chain at minimal degree stays defined") {
    Curve c = builtin("parabola");
    BoundChain bc = bound_chain(c, 64.0, 0.2, 1, params(0.9, 64.0, 0.2));
    CHECK(bc.N1 >= 0.0);
    REQUIRE(bc.steps.size() == 6);
    for (const auto& s : bc.steps) {
        CHECK(std::isfinite(s.diff));
        CHECK(std::isfinite(s.ratio));
        CHECK(s.bound_logQ >= s.bound_logK * 0.99);  // log Q dominates log(2+K) here
    }
}

TEST_CASE("zero-coefficient window brackets the block main term") {
    Curve c = builtin("parabola");
    double Q = 128.0, d = 0.1;
    BoundChain bc = bound_chain(c, Q, d, 8, params(0.9, Q, d));
    double mt = main_term(c.eta, c.xi, Q, d, CountMode::DyadicBlock);
    // 2 delta * pair_count tracks 3 (xi-eta) delta Q^2 up to edge effects
    CHECK(bc.N0_plus >= mt * 0.9);
    CHECK(bc.N0_minus <= mt * 1.1);
}

TEST_CASE("exponent fitting") {
    std::vector<std::pair<double, double>> pts;
    for (double Q : {64.0, 128.0, 256.0, 512.0, 1024.0}) pts.emplace_back(Q, std::pow(Q, 1.5));
    ExponentFit f = exponent_fit(pts);
    CHECK(f.slope == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(f.dropped == 0);

    pts[2].second = 0.0;  // dropped, noted
    ExponentFit g = exponent_fit(pts);
    CHECK(g.dropped == 1);
    CHECK(g.slope == doctest::Approx(1.5).epsilon(1e-9));

    std::vector<std::pair<double, double>> few{{2, 4}, {4, 16}, {8, 0}, {16, 0}};
    CHECK_THROWS(exponent_fit(few));
}
