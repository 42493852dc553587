#pragma once

#include "nearcurve/curve.hpp"

#include <complex>
#include <functional>

namespace nearcurve {

struct IndexBounds {
    long long k = 0;
    long long H_minus = 0, H_plus = 0, h_minus = 0, h_plus = 0;
    long long H() const { return std::max(std::llabs(H_minus), std::llabs(H_plus)); }
};

struct PhasePoint {
    long long k = 0, h = 0;
    double beta_h = 0.0;   // root of k f'(beta) = h in [eta, xi]
    double lambda_h = 0.0; // ||k f(beta_h) - h beta_h||
};

/// Sum over eta q < a <= xi q of e(k q f(a/q)), e(x) = exp(2 pi i x).
std::complex<double> exp_sum(const Curve& c, long long k, long long q);

/// H/h index bounds from the endpoint values of k f' (monotone on [eta,xi]).
IndexBounds index_bounds(const Curve& c, long long k);

/// Safeguarded Newton root of k f'(beta) = h; residual <= 1e-12 |k|.
PhasePoint stationary_point(const Curve& c, long long k, long long h);

struct OscResult {
    std::complex<double> value;
    double err_estimate = 0.0;
    bool converged = true;
    long long evals = 0;
};

/// q * integral over [lo, hi] of e(q (k f(beta) - h beta)) d beta, with f
/// extended beyond [eta, xi].  Adaptive panels keyed to the local phase
/// derivative; absolute error target tol_scale * q * (hi - lo).
OscResult osc_integral(const Curve& c, long long k, long long h, long long q, double lo, double hi,
                       double tol_scale = 1e-9);

struct SumIntegralReport {
    std::complex<double> lhs;  // exp_sum
    std::complex<double> rhs;  // sum over H- <= h <= H+ of the integrals
    double diff = 0.0;
    long long H = 0;
    double normalized = 0.0;  // diff / log(2 + H)
};

/// Both sides of the Poisson/van-der-Corput step for one (k, q).
SumIntegralReport sum_integral_compare(const Curve& c, long long k, long long q);

/// Number of pairs (k, h), 0 < |k| <= K, h_- < h < h_+, with lambda_h <= 1/Q.
long long small_lambda_census(const Curve& c, int K, double Q);

/// mu = (xi - eta)/2, the half-width of the stationary-point window.
double phase_window_halfwidth(const Curve& c);

// --- generic oscillatory quadrature (shared with the bound-chain diagnostics) ---

/// Adaptive complex quadrature of f over [lo, hi].  `cycles` maps beta to the
/// local oscillation density (cycles per unit length); panels are split until
/// each holds at most half a cycle, then refined on the embedded-rule error
/// estimate until the per-panel share of abs_tol is met.
OscResult osc_quadrature(const std::function<std::complex<double>(double)>& f,
                         const std::function<double(double)>& cycles, double lo, double hi,
                         double abs_tol);

/// Closed-form sum over q = qa..qb (inclusive) of q e(q phi); falls back to
/// direct summation when e(phi) is too close to 1.
std::complex<double> weighted_geometric_sum(double phi, long long qa, long long qb);

/// e(x) = exp(2 pi i x) with argument reduction.
std::complex<double> unit_exp(double x);

}  // namespace nearcurve
