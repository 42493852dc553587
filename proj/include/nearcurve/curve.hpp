#pragma once

#include "nearcurve/rational.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nearcurve {

// A planar curve y = f(x) on [eta, xi] with f'' continuous, sign-definite
// and bounded away from zero.  Immutable after construction.
struct Curve {
    std::string id;
    double eta = 0.0, xi = 1.0;
    BigRat eta_exact, xi_exact;

    std::function<double(double)> f, f1, f2;
    // Optional long-double evaluator for precision escalation near the
    // membership threshold.
    std::function<long double(long double)> f_ld;

    double theta = 0.9;       // Hoelder exponent of f''
    double f2_lower = 0.0;    // certified lower bound for |f''| on [eta, xi]
    double lip_estimate = 0.0;  // grid estimate of the Lip_theta constant of f''

    // When nonempty, f is exactly this polynomial (rational coefficients,
    // ascending degree) and the exact counting oracle is available.
    std::vector<BigRat> exact_form;
    std::vector<double> poly_d;  // double mirror, same order

    bool has_exact() const { return !exact_form.empty(); }
};

/// Registry of named curves: parabola, cubic, exp, sqrt, circle-arc.
Curve builtin(const std::string& name);
std::vector<std::string> builtin_names();

/// Builds a polynomial curve with exact rational data; validates the
/// second-derivative hypotheses on a dense grid.
Curve make_poly_curve(std::vector<BigRat> coeffs, const BigRat& eta, const BigRat& xi,
                      double theta, std::string id = "poly");

/// C^2 extension of f to all of R: the quadratic Taylor jet at the nearest
/// endpoint is used outside [eta, xi].
double eval_extended(const Curve& c, double beta);
double eval_extended_d1(const Curve& c, double beta);
double eval_extended_d2(const Curve& c, double beta);
long double eval_extended_ld(const Curve& c, long double beta);

/// Grid estimate of sup |f''(x)-f''(y)| / |x-y|^theta over sampled pairs.
/// Sampling is seeded (kDefaultSeed); the first n points of the stream are
/// used, so the estimate is non-decreasing in `samples`.
double estimate_lip(const Curve& c, double theta, int samples);

/// Grid validation of the Curve invariants; throws on violation.
void validate_curve(const Curve& c, int grid = 10000);

}  // namespace nearcurve
