#include "nearcurve/oscillatory.hpp"

#include "nearcurve/lattice.hpp"
#include "nearcurve/util.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace nearcurve {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct GaussRule {
    std::vector<double> x, w;  // nodes/weights on [-1, 1]
};

// Gauss-Legendre nodes by Newton iteration on P_n.
GaussRule gauss_legendre(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        r.x[i] = x;
        r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

const GaussRule& rule15() {
    static const GaussRule r = gauss_legendre(15);
    return r;
}
const GaussRule& rule7() {
    static const GaussRule r = gauss_legendre(7);
    return r;
}

template <class F>
std::complex<double> apply_rule(const GaussRule& g, const F& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Kahan re, im;
    for (size_t i = 0; i < g.x.size(); ++i) {
        std::complex<double> v = f(c + h * g.x[i]);
        re.add(g.w[i] * v.real());
        im.add(g.w[i] * v.imag());
    }
    return {h * re.sum, h * im.sum};
}

}  // namespace

std::complex<double> unit_exp(double x) {
    // x - rint(x) equals remainder(x, 1.0) in round-to-nearest and avoids
    // glibc's per-call floating-point environment save/restore
    double r = kTwoPi * (x - std::rint(x));
    return {std::cos(r), std::sin(r)};
}

OscResult osc_quadrature(const std::function<std::complex<double>(double)>& f,
                         const std::function<double(double)>& cycles, double lo, double hi,
                         double abs_tol) {
    OscResult out;
    if (!(lo < hi)) throw std::invalid_argument("osc_quadrature: need lo < hi");
    const double total = hi - lo;
    const double min_len = total * 1e-12;
    const long long max_panels = 4'000'000;
    long long panels = 0;

    struct Seg {
        double a, b;
    };
    std::vector<Seg> stack{{lo, hi}};
    Kahan re, im, err;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        double len = s.b - s.a;
        double mid = 0.5 * (s.a + s.b);
        double nu = std::max({cycles(s.a), cycles(mid), cycles(s.b)});
        bool can_split = len > min_len && panels + (long long)stack.size() < max_panels;
        // one cycle per panel keeps the 15-point node spacing under 1/8 cycle
        if (nu * len > 1.0 && can_split) {
            stack.push_back({s.a, mid});
            stack.push_back({mid, s.b});
            continue;
        }
        std::complex<double> i15 = apply_rule(rule15(), f, s.a, s.b);
        std::complex<double> i7 = apply_rule(rule7(), f, s.a, s.b);
        out.evals += 22;
        double e = std::abs(i15 - i7);
        // Panels whose error estimate sits at the rounding floor of the
        // integrand cannot improve by splitting; accept them.
        bool at_floor = e <= 1e-12 * (std::abs(i15) + std::abs(i7));
        if (e > abs_tol * len / total && !at_floor && can_split) {
            stack.push_back({s.a, mid});
            stack.push_back({mid, s.b});
            continue;
        }
        ++panels;
        re.add(i15.real());
        im.add(i15.imag());
        err.add(e);
        if (e > abs_tol * len / total) out.converged = false;
    }
    out.value = {re.sum, im.sum};
    out.err_estimate = err.sum;
    return out;
}

std::complex<double> exp_sum(const Curve& c, long long k, long long q) {
    if (k == 0) throw std::invalid_argument("exp_sum: k must be nonzero (k=0 is the N0 path)");
    if (q < 1) throw std::invalid_argument("exp_sum: q must be positive");
    auto [amin, amax] = a_range(c, q);
    Kahan re, im;
    const double kd = (double)k, qd = (double)q, inv = 1.0 / (double)q;
    const bool poly = !c.poly_d.empty();
    const std::vector<double>& pd = c.poly_d;
    for (long long a = amin; a <= amax; ++a) {
        double x = (double)a * inv;
        double fv;
        if (poly) {
            fv = 0.0;
            for (size_t i = pd.size(); i-- > 0;) fv = fv * x + pd[i];
        } else {
            fv = c.f(x);
        }
        std::complex<double> e = unit_exp(kd * qd * fv);
        re.add(e.real());
        im.add(e.imag());
    }
    return {re.sum, im.sum};
}

IndexBounds index_bounds(const Curve& c, long long k) {
    if (k == 0) throw std::invalid_argument("index_bounds: k must be nonzero");
    double v1 = (double)k * c.f1(c.eta);
    double v2 = (double)k * c.f1(c.xi);
    double lo = std::min(v1, v2), hi = std::max(v1, v2);
    IndexBounds b;
    b.k = k;
    b.H_minus = (long long)std::floor(lo) - 1;
    b.H_plus = (long long)std::ceil(hi) + 1;
    b.h_minus = (long long)std::ceil(lo) + 1;
    b.h_plus = (long long)std::floor(hi) - 1;
    return b;
}

PhasePoint stationary_point(const Curve& c, long long k, long long h) {
    if (k == 0) throw std::invalid_argument("stationary_point: k must be nonzero");
    double kd = (double)k, hd = (double)h;
    double glo = kd * c.f1(c.eta) - hd;
    double ghi = kd * c.f1(c.xi) - hd;
    if (glo == 0.0 || ghi == 0.0 || (glo > 0) == (ghi > 0))
        throw std::invalid_argument("stationary_point: h outside the open range of k f'");
    double blo = c.eta, bhi = c.xi;
    double beta = 0.5 * (blo + bhi);
    const double tol = 1e-12 * std::fabs(kd);
    for (int it = 0; it < 200; ++it) {
        double g = kd * c.f1(beta) - hd;
        if (std::fabs(g) <= tol) break;
        if ((g > 0) == (ghi > 0))
            bhi = beta;
        else
            blo = beta;
        double step = g / (kd * c.f2(beta));
        double next = beta - step;
        if (!(next > blo && next < bhi)) next = 0.5 * (blo + bhi);  // bisection safeguard
        beta = next;
    }
    PhasePoint p;
    p.k = k;
    p.h = h;
    p.beta_h = beta;
    p.lambda_h = dist_to_int(kd * c.f(beta) - hd * beta);
    return p;
}

OscResult osc_integral(const Curve& c, long long k, long long h, long long q, double lo, double hi,
                       double tol_scale) {
    if (k == 0) throw std::invalid_argument("osc_integral: k must be nonzero");
    if (q < 1) throw std::invalid_argument("osc_integral: q must be positive");
    if (!(lo < hi)) throw std::invalid_argument("osc_integral: need lo < hi");
    const double kd = (double)k, hd = (double)h, qd = (double)q;
    auto f = [&](double beta) {
        double phi = kd * eval_extended(c, beta) - hd * beta;
        return unit_exp(qd * phi);
    };
    auto cycles = [&](double beta) {
        return qd * std::fabs(kd * eval_extended_d1(c, beta) - hd);
    };
    OscResult r = osc_quadrature(f, cycles, lo, hi, tol_scale * (hi - lo));
    r.value *= qd;
    r.err_estimate *= qd;
    return r;
}

SumIntegralReport sum_integral_compare(const Curve& c, long long k, long long q) {
    SumIntegralReport rep;
    rep.lhs = exp_sum(c, k, q);
    IndexBounds b = index_bounds(c, k);
    std::complex<double> rhs = 0.0;
    for (long long h = b.H_minus; h <= b.H_plus; ++h)
        rhs += osc_integral(c, k, h, q, c.eta, c.xi).value;
    rep.rhs = rhs;
    rep.H = b.H();
    rep.diff = std::abs(rep.lhs - rep.rhs);
    rep.normalized = rep.diff / std::log(2.0 + (double)rep.H);
    return rep;
}

long long small_lambda_census(const Curve& c, int K, double Q) {
    if (K < 1) throw std::invalid_argument("small_lambda_census: K must be >= 1");
    if (!(Q > 0)) throw std::invalid_argument("small_lambda_census: Q must be positive");
    long long n = 0;
    for (long long ak = 1; ak <= K; ++ak) {
        for (long long k : {ak, -ak}) {
            IndexBounds b = index_bounds(c, k);
            for (long long h = b.h_minus + 1; h <= b.h_plus - 1; ++h) {
                PhasePoint p = stationary_point(c, k, h);
                if (p.lambda_h <= 1.0 / Q) ++n;
            }
        }
    }
    return n;
}

double phase_window_halfwidth(const Curve& c) { return 0.5 * (c.xi - c.eta); }

std::complex<double> weighted_geometric_sum(double phi, long long qa, long long qb) {
    if (qb < qa) return 0.0;
    std::complex<double> z = unit_exp(phi);
    // Near z = 1 the closed form cancels catastrophically (the numerator is
    // O(|1-z|^2 n^2) assembled from O(n) terms); its absolute noise reaches
    // ~1e-4 while |1-z| qb is of order 1, which stalls adaptive quadrature on
    // every resonance spike. Sum directly over a generous window around the
    // resonance, advancing the phase by recurrence to keep the cost at one
    // complex multiply per term.
    if (std::abs(z - 1.0) * (double)qb < 10.0) {
        std::complex<double> w = unit_exp((double)qa * phi);
        Kahan re, im;
        for (long long q = qa; q <= qb; ++q) {
            re.add((double)q * w.real());
            im.add((double)q * w.imag());
            w *= z;
        }
        return {re.sum, im.sum};
    }
    // F(n) = sum_{q=1}^{n} q z^q = z (1 - (n+1) z^n + n z^{n+1}) / (1-z)^2
    auto F = [&](long long n) -> std::complex<double> {
        if (n <= 0) return 0.0;
        std::complex<double> zn = unit_exp((double)n * phi);
        std::complex<double> zn1 = unit_exp((double)(n + 1) * phi);
        std::complex<double> num = 1.0 - (double)(n + 1) * zn + (double)n * zn1;
        std::complex<double> d = 1.0 - z;
        return z * num / (d * d);
    };
    return F(qb) - F(qa - 1);
}

}  // namespace nearcurve
