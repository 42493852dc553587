#pragma once

#include "nearcurve/curve.hpp"

#include <complex>
#include <string>
#include <vector>

namespace nearcurve {

enum class SelbergSign { Majorant, Minorant };

// Degree-<=K trigonometric polynomial sandwiching the indicator of
// J = (-delta, delta) on the torus, stored as Fourier coefficients.
struct SelbergPolynomial {
    SelbergSign sign = SelbergSign::Majorant;
    int K = 1;
    double delta = 0.1;
    // coeffs[K + k] = S^(k) for k = -K..K; real and even for symmetric J,
    // kept in complex form so conjugate symmetry is testable.
    std::vector<std::complex<double>> coeffs;

    std::complex<double> coeff(int k) const { return coeffs[(size_t)(K + k)]; }
};

/// Beurling-Vaaler construction specialized to J = (-delta, delta).
SelbergPolynomial selberg_build(SelbergSign sign, int K, double delta);

/// Pointwise value, sum over |k| <= K of S^(k) e(k alpha); period 1.
double selberg_eval(const SelbergPolynomial& p, double alpha);

/// Same value via the real cosine form with a Chebyshev recurrence; used by
/// the grid verification and the sandwich sums.
double selberg_eval_fast(const SelbergPolynomial& p, double alpha);

struct SelbergVerifyReport {
    bool ok = false;
    bool sandwich_ok = false;    // majorant >= indicator / minorant <= indicator
    bool integral_ok = false;    // S^(0) = 2 delta +- 1/(K+1)
    bool domination_ok = false;  // |S^(k)| <= |S^(0)|
    bool proximity_ok = false;   // |S^(k) - sin(2 pi k delta)/(pi k)| <= 1/(K+1)
    bool negative_mass = false;  // minorant with 2 delta < 1/(K+1)
    double worst_sandwich_violation = 0.0;
    std::vector<std::string> failures;
};

SelbergVerifyReport selberg_verify(const SelbergPolynomial& p, int grid_size);

struct SandwichCounts {
    double lower = 0.0;
    long long count = 0;
    double upper = 0.0;
};

/// Sum of S^-(q f(a/q)), the true dyadic-block count, and the S^+ sum over
/// Q < q <= 2Q, eta q < a <= xi q.
SandwichCounts sandwich_counts(const Curve& c, double Q, double delta, int K, int workers = 1);

}  // namespace nearcurve
