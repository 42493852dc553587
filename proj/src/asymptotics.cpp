#include "nearcurve/asymptotics.hpp"

#include "nearcurve/oscillatory.hpp"
#include "nearcurve/util.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace nearcurve {

const char* regime_name(Regime r) { return r == Regime::One ? "one" : "two"; }

double main_term(double eta, double xi, double Q, double delta, CountMode mode) {
    double base = (xi - eta) * delta * Q * Q;
    return mode == CountMode::DyadicBlock ? 3.0 * base : base;
}

double error_term(const Curve& c, double Q, double delta, CountMode mode, int workers) {
    CountQuery q;
    q.Q = Q;
    q.delta = delta;
    q.mode = mode;
    long long n = count(c, q, workers).count;
    return (double)n - main_term(c.eta, c.xi, Q, delta, mode);
}

double regime_threshold(double Q, double theta) {
    if (!(Q > 1.0)) throw std::invalid_argument("regime_threshold: need Q > 1");
    long double lq = logl((long double)Q);
    long double t = theta;
    long double val = expl(((1.0L - 2.0L * t) / (2.0L - t)) * logl((long double)Q)) *
                      expl(-((5.0L - t) / (2.0L - t)) * logl(lq));
    return (double)val;
}

Regime regime(const RegimeParams& p) {
    if (!(p.Q > 1.0)) throw std::invalid_argument("regime: need Q > 1");
    // The first branch needs the threshold power of Q to decay, which forces
    // theta > 1/2; with theta <= 1/2 the threshold grows and delta < 1/2
    // cannot dominate it asymptotically.
    if (p.theta <= 0.5) return Regime::Two;
    return p.delta >= p.regime_c * regime_threshold(p.Q, p.theta) ? Regime::One : Regime::Two;
}

KChoice choose_K(const RegimeParams& p) {
    KChoice out;
    out.regime = regime(p);
    long double Q = p.Q, d = p.delta, t = p.theta;
    long double Kf;
    if (out.regime == Regime::One)
        Kf = expl((-2.0L / 3.0L) * logl(d) + (1.0L / 3.0L) * logl(Q) -
                  (2.0L / 3.0L) * logl(logl(Q)));
    else
        Kf = expl((-2.0L / (5.0L - t)) * logl(d) + ((1.0L + t) / (5.0L - t)) * logl(Q));
    if (!(Kf >= 1.0L))
        throw std::invalid_argument("choose_K: inputs outside the admissible range (K < 1)");
    out.K = (long long)floorl(Kf);
    out.delta_K_ok = d * (long double)out.K > 1.0L;
    out.K_cap_ok = (long double)out.K <= expl((1.0L - (2.0L / 3.0L) * p.epsilon) * logl(Q));
    return out;
}

double error_bound(const RegimeParams& p) {
    if (!(p.Q > 1.0)) throw std::invalid_argument("error_bound: need Q > 1");
    long double Q = p.Q, d = p.delta, t = p.theta;
    if (regime(p) == Regime::One)
        return (double)(powl(d, 2.0L / 3.0L) * powl(Q, 5.0L / 3.0L) *
                        powl(logl(Q), 2.0L / 3.0L));
    return (double)(powl(d, 2.0L / (5.0L - t)) * powl(Q, 3.0L * (3.0L - t) / (5.0L - t)));
}

bool admissible_delta(const RegimeParams& p) {
    if (p.delta >= 0.5 || p.delta <= 0.0) return false;
    long double fl = expl((-(1.0L + (long double)p.theta) / (3.0L - (long double)p.theta) +
                           (long double)p.epsilon) *
                          logl((long double)p.Q));
    return (long double)p.delta >= fl;
}

namespace {

// Integral over [lo, hi] of sum_{Q < q <= 2Q} q e(q (k f(beta) - h beta)).
std::complex<double> block_integral(const Curve& c, long long k, long long h, long long qlo,
                                    long long qhi, double lo, double hi, double abs_tol) {
    const double kd = (double)k, hd = (double)h;
    auto f = [&](double beta) {
        double phi = kd * eval_extended(c, beta) - hd * beta;
        return weighted_geometric_sum(phi, qlo, qhi);
    };
    auto cycles = [&](double beta) {
        return (double)qhi * std::fabs(kd * eval_extended_d1(c, beta) - hd);
    };
    return osc_quadrature(f, cycles, lo, hi, abs_tol).value;
}

}  // namespace

BoundChain bound_chain(const Curve& c, double Q, double delta, int K, const RegimeParams& p,
                       int workers) {
    if (K < 1) throw std::invalid_argument("bound_chain: K must be >= 1");
    BoundChain out;
    out.K = K;
    const long long qlo = (long long)std::floor(Q) + 1;
    const long long qhi = (long long)std::floor(2.0 * Q);
    const double w = delta + 1.0 / K;
    const double mu = phase_window_halfwidth(c);
    const double abs_tol = 1e-9 * Q * Q;

    long long pairs = 0;
    for (long long q = qlo; q <= qhi; ++q) {
        auto [amin, amax] = a_range(c, q);
        pairs += std::max(0LL, amax - amin + 1);
    }
    out.pair_count = pairs;
    out.N0_plus = (2.0 * delta + 1.0 / (K + 1.0)) * (double)pairs;
    out.N0_minus = (2.0 * delta - 1.0 / (K + 1.0)) * (double)pairs;

    Kahan n1, n2, n3, n4, n5;
    std::vector<long long> kvals;
    for (long long ak = 1; ak <= K; ++ak) {
        kvals.push_back(ak);
        kvals.push_back(-ak);
    }
    std::vector<double> r1(kvals.size()), r2(kvals.size()), r3(kvals.size()), r4(kvals.size()),
        r5(kvals.size());
    parallel_blocks(0, (long long)kvals.size(), workers, [&](long long lo, long long hi, int) {
        for (long long i = lo; i < hi; ++i) {
            long long k = kvals[i];
            // N1: direct exponential sums over the block.
            std::complex<double> s1 = 0.0;
            for (long long q = qlo; q <= qhi; ++q) s1 += exp_sum(c, k, q);
            r1[i] = w * std::abs(s1);

            IndexBounds b = index_bounds(c, k);
            std::complex<double> in2 = 0.0, in3 = 0.0, in4 = 0.0, in5 = 0.0;
            for (long long h = b.H_minus; h <= b.H_plus; ++h) {
                std::complex<double> I =
                    block_integral(c, k, h, qlo, qhi, c.eta, c.xi, abs_tol);
                in2 += I;
                if (h > b.h_minus && h < b.h_plus) {
                    in3 += I;
                    PhasePoint sp = stationary_point(c, k, h);
                    if (sp.lambda_h > 1.0 / Q) {
                        in4 += I;
                        in5 += block_integral(c, k, h, qlo, qhi, sp.beta_h - mu, sp.beta_h + mu,
                                              abs_tol);
                    }
                }
            }
            r2[i] = w * std::abs(in2);
            r3[i] = w * std::abs(in3);
            r4[i] = w * std::abs(in4);
            r5[i] = w * std::abs(in5);
        }
    });
    for (size_t i = 0; i < kvals.size(); ++i) {
        n1.add(r1[i]);
        n2.add(r2[i]);
        n3.add(r3[i]);
        n4.add(r4[i]);
        n5.add(r5[i]);
    }
    out.N1 = n1.sum;
    out.N2 = n2.sum;
    out.N3 = n3.sum;
    out.N4 = n4.sum;
    out.N5 = n5.sum;

    const double Kd = (double)K;
    const double lgK = std::log(2.0 + Kd);
    const double lgQ = std::log(Q);
    const double th = p.theta, eps = p.epsilon;
    auto push = [&](const std::string& name, double diff, double bK, double bQ) {
        ChainStep s;
        s.name = name;
        s.diff = diff;
        s.bound_logK = bK;
        s.bound_logQ = bQ;
        s.ratio = diff / bK;
        out.steps.push_back(s);
    };
    push("N1-N2", std::fabs(out.N1 - out.N2), w * Kd * Q * lgK, w * Kd * Q * lgQ);
    {
        double b = delta * std::sqrt(Kd) * std::pow(Q, 1.5) + std::pow(Q, 1.5) / std::sqrt(Kd);
        push("N2-N3", std::fabs(out.N2 - out.N3), b, b);
    }
    push("N3-N4", std::fabs(out.N3 - out.N4),
         w * std::pow(Q, 1.5) * (std::pow(Kd, 1.5) * std::pow(Q, eps - 1.0) + std::sqrt(Kd) * lgK),
         w * std::pow(Q, 1.5) * (std::pow(Kd, 1.5) * std::pow(Q, eps - 1.0) + std::sqrt(Kd) * lgQ));
    push("N4-N5", std::fabs(out.N4 - out.N5), w * Q * Kd * lgK, w * Q * Kd * lgQ);
    push("N5", out.N5,
         w * (std::pow(Q, 0.5 + eps) * std::pow(Kd, 1.5) + std::pow(Q, 1.5) * std::sqrt(Kd) * lgK +
              std::pow(Q, (3.0 - th) / 2.0) * std::pow(Kd, (3.0 - th) / 2.0)),
         w * (std::pow(Q, 0.5 + eps) * std::pow(Kd, 1.5) + std::pow(Q, 1.5) * std::sqrt(Kd) * lgQ +
              std::pow(Q, (3.0 - th) / 2.0) * std::pow(Kd, (3.0 - th) / 2.0)));
    {
        double commonK = std::sqrt(Q) * lgK / std::sqrt(Kd) + lgK +
                         std::sqrt(Kd) * std::pow(Q, eps - 0.5) +
                         std::pow(Kd * Q, (1.0 - th) / 2.0);
        double commonQ = std::sqrt(Q) * lgQ / std::sqrt(Kd) + lgQ +
                         std::sqrt(Kd) * std::pow(Q, eps - 0.5) +
                         std::pow(Kd * Q, (1.0 - th) / 2.0);
        push("N1-total", out.N1, (delta * Kd + 1.0) * Q * commonK, (delta * Kd + 1.0) * Q * commonQ);
    }
    return out;
}

ExponentFit exponent_fit(const std::vector<std::pair<double, double>>& q_and_error) {
    ExponentFit fit;
    std::vector<double> xs, ys;
    for (auto& [Q, E] : q_and_error) {
        if (E == 0.0) {
            ++fit.dropped;
            continue;
        }
        xs.push_back(std::log(Q));
        ys.push_back(std::log(std::fabs(E)));
    }
    if (xs.size() < 4)
        throw std::invalid_argument("exponent_fit: need at least 4 records with E != 0");
    double n = (double)xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    for (size_t i = 0; i < xs.size(); ++i)
        fit.residuals.push_back(ys[i] - (fit.intercept + fit.slope * xs[i]));
    return fit;
}

}  // namespace nearcurve
