#include "nearcurve/curve.hpp"

#include "nearcurve/util.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace nearcurve {

namespace {

double horner(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

long double horner_ld(const std::vector<double>& c, long double x) {
    long double v = 0.0L;
    for (size_t i = c.size(); i-- > 0;) v = v * x + (long double)c[i];
    return v;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
    std::vector<double> d;
    for (size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * (double)i);
    if (d.empty()) d.push_back(0.0);
    return d;
}

}  // namespace

double eval_extended(const Curve& c, double beta) {
    if (beta > c.xi) {
        double t = beta - c.xi;
        return 0.5 * t * t * c.f2(c.xi) + t * c.f1(c.xi) + c.f(c.xi);
    }
    if (beta < c.eta) {
        double t = beta - c.eta;
        return 0.5 * t * t * c.f2(c.eta) + t * c.f1(c.eta) + c.f(c.eta);
    }
    return c.f(beta);
}

double eval_extended_d1(const Curve& c, double beta) {
    if (beta > c.xi) return (beta - c.xi) * c.f2(c.xi) + c.f1(c.xi);
    if (beta < c.eta) return (beta - c.eta) * c.f2(c.eta) + c.f1(c.eta);
    return c.f1(beta);
}

double eval_extended_d2(const Curve& c, double beta) {
    if (beta > c.xi) return c.f2(c.xi);
    if (beta < c.eta) return c.f2(c.eta);
    return c.f2(beta);
}

long double eval_extended_ld(const Curve& c, long double beta) {
    if (beta > (long double)c.xi) {
        long double t = beta - (long double)c.xi;
        return 0.5L * t * t * (long double)c.f2(c.xi) + t * (long double)c.f1(c.xi) +
               (c.f_ld ? c.f_ld((long double)c.xi) : (long double)c.f(c.xi));
    }
    if (beta < (long double)c.eta) {
        long double t = beta - (long double)c.eta;
        return 0.5L * t * t * (long double)c.f2(c.eta) + t * (long double)c.f1(c.eta) +
               (c.f_ld ? c.f_ld((long double)c.eta) : (long double)c.f(c.eta));
    }
    if (c.f_ld) return c.f_ld(beta);
    return (long double)c.f((double)beta);
}

double estimate_lip(const Curve& c, double theta, int samples) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("estimate_lip: theta must lie in (0, 1]");
    if (samples < 2) throw std::invalid_argument("estimate_lip: need samples >= 2");
    // Deterministic point stream: endpoints first, then seeded uniforms, so
    // the estimate over the first n points is monotone in n.
    std::mt19937_64 rng(kDefaultSeed);
    std::uniform_real_distribution<double> uni(c.eta, c.xi);
    std::vector<double> pts;
    pts.reserve(samples);
    pts.push_back(c.eta);
    pts.push_back(c.xi);
    while ((int)pts.size() < samples) pts.push_back(uni(rng));
    std::vector<double> f2v(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) f2v[i] = c.f2(pts[i]);
    double best = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) {
            double dx = std::fabs(pts[i] - pts[j]);
            if (dx == 0.0) continue;
            double r = std::fabs(f2v[i] - f2v[j]) / std::pow(dx, theta);
            best = std::max(best, r);
        }
    return best;
}

void validate_curve(const Curve& c, int grid) {
    if (!(c.eta < c.xi)) throw std::invalid_argument("curve: eta must be < xi");
    if (!(c.f2_lower > 0.0)) throw std::invalid_argument("curve: f2_lower must be > 0");
    if (!(c.theta > 0.0 && c.theta < 1.0))
        throw std::invalid_argument("curve: theta must lie in (0, 1)");
    double sign = 0.0;
    for (int i = 0; i <= grid; ++i) {
        double x = c.eta + (c.xi - c.eta) * i / grid;
        double s = c.f2(x);
        if (std::fabs(s) < c.f2_lower)
            throw std::invalid_argument("curve: |f''| drops below f2_lower on grid");
        double sg = s > 0 ? 1.0 : -1.0;
        if (sign == 0.0) sign = sg;
        if (sg != sign) throw std::invalid_argument("curve: f'' changes sign on grid");
        if (c.has_exact()) {
            double pv = horner(c.poly_d, x);
            if (std::fabs(c.f(x) - pv) > 1e-12 * std::max(1.0, std::fabs(pv)))
                throw std::invalid_argument("curve: exact_form disagrees with f on grid");
        }
    }
    // Derivatives against central differences, relative tolerance 1e-6.
    for (int i = 1; i < 32; ++i) {
        double x = c.eta + (c.xi - c.eta) * i / 32.0;
        double h = 1e-5 * (c.xi - c.eta);
        double d1 = (c.f(x + h) - c.f(x - h)) / (2 * h);
        double d2 = (c.f(x + h) - 2 * c.f(x) + c.f(x - h)) / (h * h);
        if (std::fabs(d1 - c.f1(x)) > 1e-6 * std::max(1.0, std::fabs(d1)))
            throw std::invalid_argument("curve: f' disagrees with finite differences");
        if (std::fabs(d2 - c.f2(x)) > 1e-4 * std::max(1.0, std::fabs(d2)))
            throw std::invalid_argument("curve: f'' disagrees with finite differences");
    }
}

Curve make_poly_curve(std::vector<BigRat> coeffs, const BigRat& eta, const BigRat& xi,
                      double theta, std::string id) {
    while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
    if (coeffs.size() < 3)
        throw std::invalid_argument("make_poly_curve: degree must be >= 2 (f'' nonzero)");
    Curve c;
    c.id = std::move(id);
    c.eta_exact = eta;
    c.xi_exact = xi;
    c.eta = to_double(eta);
    c.xi = to_double(xi);
    c.theta = theta;
    c.exact_form = std::move(coeffs);
    for (const auto& q : c.exact_form) c.poly_d.push_back(to_double(q));
    auto p = c.poly_d;
    auto p1 = poly_derivative(p);
    auto p2 = poly_derivative(p1);
    c.f = [p](double x) { return horner(p, x); };
    c.f1 = [p1](double x) { return horner(p1, x); };
    c.f2 = [p2](double x) { return horner(p2, x); };
    c.f_ld = [p](long double x) { return horner_ld(p, x); };
    // Certify the second-derivative floor from a dense grid.
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 10000; ++i) {
        double x = c.eta + (c.xi - c.eta) * i / 10000.0;
        lo = std::min(lo, std::fabs(c.f2(x)));
    }
    c.f2_lower = 0.99 * lo;
    validate_curve(c);
    c.lip_estimate = estimate_lip(c, c.theta, 1000);
    return c;
}

std::vector<std::string> builtin_names() {
    return {"parabola", "cubic", "exp", "sqrt", "circle-arc"};
}

Curve builtin(const std::string& name) {
    if (name == "parabola") {
        Curve c = make_poly_curve({BigRat(0), BigRat(0), BigRat(1)}, BigRat(1), BigRat(2), 0.9,
                                  "parabola");
        c.f2_lower = 2.0;  // f'' = 2 exactly; no grid safety factor needed
        validate_curve(c);
        return c;
    }
    if (name == "cubic") {
        Curve c = make_poly_curve({BigRat(0), BigRat(0), BigRat(0), BigRat(1)}, BigRat(1),
                                  BigRat(2), 0.9, "cubic");
        c.f2_lower = 6.0;  // f'' = 6x, minimum 6 at the left endpoint
        validate_curve(c);
        return c;
    }
    Curve c;
    c.theta = 0.9;
    if (name == "exp") {
        c.id = "exp";
        c.eta_exact = 0;
        c.xi_exact = 1;
        c.eta = 0.0;
        c.xi = 1.0;
        c.f = [](double x) { return std::exp(x); };
        c.f1 = [](double x) { return std::exp(x); };
        c.f2 = [](double x) { return std::exp(x); };
        c.f_ld = [](long double x) { return expl(x); };
        c.f2_lower = 1.0;
    } else if (name == "sqrt") {
        c.id = "sqrt";
        c.eta_exact = 1;
        c.xi_exact = 2;
        c.eta = 1.0;
        c.xi = 2.0;
        c.f = [](double x) { return std::sqrt(x); };
        c.f1 = [](double x) { return 0.5 / std::sqrt(x); };
        c.f2 = [](double x) { return -0.25 / (x * std::sqrt(x)); };
        c.f_ld = [](long double x) { return sqrtl(x); };
        c.f2_lower = 0.088;  // |f''| >= 1/(4 * 2^{3/2})
    } else if (name == "circle-arc") {
        c.id = "circle-arc";
        c.eta_exact = BigRat(-1, 2);
        c.xi_exact = BigRat(1, 2);
        c.eta = -0.5;
        c.xi = 0.5;
        c.f = [](double x) { return std::sqrt(1.0 - x * x); };
        c.f1 = [](double x) { return -x / std::sqrt(1.0 - x * x); };
        c.f2 = [](double x) { double s = 1.0 - x * x; return -1.0 / (s * std::sqrt(s)); };
        c.f_ld = [](long double x) { return sqrtl(1.0L - x * x); };
        c.f2_lower = 1.0;  // |f''| = (1-x^2)^{-3/2} >= 1
    } else {
        throw std::invalid_argument("builtin: unknown curve '" + name + "'");
    }
    validate_curve(c);
    c.lip_estimate = estimate_lip(c, c.theta, 1000);
    return c;
}

}  // namespace nearcurve
