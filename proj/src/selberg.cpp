#include "nearcurve/selberg.hpp"

#include "nearcurve/lattice.hpp"
#include "nearcurve/util.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nearcurve {

namespace {

constexpr double kPi = std::numbers::pi;

// Vaaler's kernel transform: J^(t) = pi t (1-t) cot(pi t) + t for t in (0,1).
double vaaler_jhat(double t) {
    return kPi * t * (1.0 - t) / std::tan(kPi * t) + t;
}

}  // namespace

SelbergPolynomial selberg_build(SelbergSign sign, int K, double delta) {
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("selberg_build: delta must lie in (0, 1/2)");
    if (K < 1) throw std::invalid_argument("selberg_build: K must be >= 1");
    SelbergPolynomial p;
    p.sign = sign;
    p.K = K;
    p.delta = delta;
    p.coeffs.assign(2 * (size_t)K + 1, {0.0, 0.0});
    const double s = sign == SelbergSign::Majorant ? 1.0 : -1.0;
    p.coeffs[(size_t)K] = {2.0 * delta + s / (K + 1.0), 0.0};
    for (int k = 1; k <= K; ++k) {
        double t = (double)k / (K + 1.0);
        // chi^_J(k) * J^(t) from Vaaler's sawtooth polynomial, plus the
        // Fejer-kernel correction that forces the one-sided property.
        double chat = std::sin(2.0 * kPi * k * delta) / (kPi * k);
        double v = chat * vaaler_jhat(t) + s * (1.0 - t) * std::cos(2.0 * kPi * k * delta) / (K + 1.0);
        p.coeffs[(size_t)(K + k)] = {v, 0.0};
        p.coeffs[(size_t)(K - k)] = {v, 0.0};
    }
    return p;
}

double selberg_eval(const SelbergPolynomial& p, double alpha) {
    Kahan re, im;
    for (int k = -p.K; k <= p.K; ++k) {
        double ph = 2.0 * kPi * std::remainder((double)k * alpha, 1.0);
        std::complex<double> e(std::cos(ph), std::sin(ph));
        std::complex<double> term = p.coeff(k) * e;
        re.add(term.real());
        im.add(term.imag());
    }
    if (std::fabs(im.sum) > 1e-12 * std::max(1.0, std::fabs(re.sum)))
        throw std::runtime_error("selberg_eval: imaginary residue exceeds 1e-12");
    return re.sum;
}

double selberg_eval_fast(const SelbergPolynomial& p, double alpha) {
    // Coefficients are real and even: S(a) = c0 + 2 sum_k c_k cos(2 pi k a).
    const double x = 2.0 * kPi * std::remainder(alpha, 1.0);
    const double c = std::cos(x);
    double tk1 = 1.0, tk = c;  // cos(0), cos(x)
    Kahan acc;
    acc.add(p.coeffs[(size_t)p.K].real());
    for (int k = 1; k <= p.K; ++k) {
        acc.add(2.0 * p.coeffs[(size_t)(p.K + k)].real() * tk);
        double next = 2.0 * c * tk - tk1;
        tk1 = tk;
        tk = next;
    }
    return acc.sum;
}

SelbergVerifyReport selberg_verify(const SelbergPolynomial& p, int grid_size) {
    if (grid_size < 1000) throw std::invalid_argument("selberg_verify: grid_size must be >= 1000");
    SelbergVerifyReport rep;
    const double s = p.sign == SelbergSign::Majorant ? 1.0 : -1.0;
    const double want_c0 = 2.0 * p.delta + s / (p.K + 1.0);
    rep.negative_mass = p.sign == SelbergSign::Minorant && 2.0 * p.delta < 1.0 / (p.K + 1.0);

    rep.integral_ok = std::fabs(p.coeff(0).real() - want_c0) <= 1e-14 &&
                      std::fabs(p.coeff(0).imag()) <= 1e-14;
    if (!rep.integral_ok) rep.failures.push_back("S^(0) identity violated");

    rep.domination_ok = true;
    rep.proximity_ok = true;
    double c0abs = std::abs(p.coeff(0));
    for (int k = -p.K; k <= p.K; ++k) {
        if (std::abs(p.coeff(k)) > c0abs + 1e-14) {
            rep.domination_ok = false;
            rep.failures.push_back("|S^(" + std::to_string(k) + ")| exceeds |S^(0)|");
        }
        if (k != 0) {
            double chat = std::sin(2.0 * kPi * k * p.delta) / (kPi * k);
            if (std::abs(p.coeff(k) - std::complex<double>(chat, 0.0)) > 1.0 / (p.K + 1.0) + 1e-12) {
                rep.proximity_ok = false;
                rep.failures.push_back("coefficient proximity violated at k=" + std::to_string(k));
            }
        }
    }

    rep.sandwich_ok = true;
    double worst = 0.0;
    for (int i = 0; i < grid_size; ++i) {
        double a = (double)i / grid_size;
        double chi = dist_to_int(a) < p.delta ? 1.0 : 0.0;
        double v = selberg_eval_fast(p, a);
        double gap = s * (v - chi);  // must be >= -1e-9
        if (gap < worst) worst = gap;
        if (gap < -1e-9) {
            if (rep.sandwich_ok)
                rep.failures.push_back("sandwich violated near alpha=" + std::to_string(a));
            rep.sandwich_ok = false;
        }
    }
    rep.worst_sandwich_violation = -worst;
    rep.ok = rep.sandwich_ok && rep.integral_ok && rep.domination_ok && rep.proximity_ok;
    return rep;
}

SandwichCounts sandwich_counts(const Curve& c, double Q, double delta, int K, int workers) {
    SelbergPolynomial plus = selberg_build(SelbergSign::Majorant, K, delta);
    SelbergPolynomial minus = selberg_build(SelbergSign::Minorant, K, delta);
    CountQuery query;
    query.Q = Q;
    query.delta = delta;
    query.mode = CountMode::DyadicBlock;
    SandwichCounts out;
    out.count = count(c, query, workers).count;

    long long qlo = (long long)std::floor(Q) + 1;
    long long qhi = (long long)std::floor(2.0 * Q);
    std::vector<double> lo_part(std::max(1, workers), 0.0), hi_part(std::max(1, workers), 0.0);
    const bool poly = !c.poly_d.empty();
    const std::vector<double> pd = c.poly_d;
    const auto f = c.f;
    parallel_blocks(qlo, qhi + 1, workers, [&](long long lo, long long hi, int block) {
        Kahan sl, sh;
        for (long long q = lo; q < hi; ++q) {
            auto [amin, amax] = a_range(c, q);
            double qd = (double)q, inv = 1.0 / qd;
            for (long long a = amin; a <= amax; ++a) {
                double x = (double)a * inv;
                double v;
                if (poly) {
                    double h = 0.0;
                    for (size_t i = pd.size(); i-- > 0;) h = h * x + pd[i];
                    v = qd * h;
                } else {
                    v = qd * f(x);
                }
                sl.add(selberg_eval_fast(minus, v));
                sh.add(selberg_eval_fast(plus, v));
            }
        }
        lo_part[block] = sl.sum;
        hi_part[block] = sh.sum;
    });
    Kahan l, h;
    for (double v : lo_part) l.add(v);
    for (double v : hi_part) h.add(v);
    out.lower = l.sum;
    out.upper = h.sum;
    return out;
}

}  // namespace nearcurve
