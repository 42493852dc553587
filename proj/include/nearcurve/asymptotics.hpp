#pragma once

#include "nearcurve/curve.hpp"
#include "nearcurve/lattice.hpp"

#include <string>
#include <vector>

namespace nearcurve {

struct RegimeParams {
    double theta = 0.9;
    double epsilon = 0.05;
    double Q = 1.0;
    double delta = 0.1;
    double regime_c = 1.0;  // multiplier on the regime threshold
};

enum class Regime { One, Two };
const char* regime_name(Regime r);

/// Main term: 3 (xi-eta) delta Q^2 for the dyadic block, (xi-eta) delta Q^2
/// for the full count.
double main_term(double eta, double xi, double Q, double delta, CountMode mode);

/// Exact count minus main term (signed).
double error_term(const Curve& c, double Q, double delta, CountMode mode, int workers = 1);

/// Threshold T(Q, theta) = Q^{(1-2theta)/(2-theta)} (log Q)^{-(5-theta)/(2-theta)}.
double regime_threshold(double Q, double theta);

/// Regime one requires delta >= regime_c * T and theta > 1/2 (the threshold
/// power tends to infinity otherwise, so the first range cannot hold).
Regime regime(const RegimeParams& p);

struct KChoice {
    long long K = 0;
    Regime regime = Regime::Two;
    bool delta_K_ok = false;  // delta * K > 1
    bool K_cap_ok = false;    // K <= Q^{1 - (2/3) epsilon}
};

/// K = floor(delta^{-2/3} Q^{1/3} (log Q)^{-2/3}) in regime one,
/// K = floor(delta^{-2/(5-theta)} Q^{(1+theta)/(5-theta)}) in regime two.
KChoice choose_K(const RegimeParams& p);

/// The regime's error-bound expression with constant 1.
double error_bound(const RegimeParams& p);

/// Q^{-(1+theta)/(3-theta)+epsilon} <= delta < 1/2.
bool admissible_delta(const RegimeParams& p);

struct ChainStep {
    std::string name;
    double diff = 0.0;        // |N_i - N_{i+1}| (or the terminal value)
    double bound_logK = 0.0;  // bound form with log(2+K)
    double bound_logQ = 0.0;  // same with log Q substituted
    double ratio = 0.0;       // diff / bound_logK
};

struct BoundChain {
    long long K = 0;
    long long pair_count = 0;
    double N0_plus = 0.0, N0_minus = 0.0;
    double N1 = 0.0, N2 = 0.0, N3 = 0.0, N4 = 0.0, N5 = 0.0;
    std::vector<ChainStep> steps;
};

/// Numerical evaluation of the N0..N5 decomposition at dyadic block Q with
/// Selberg degree K, plus each step difference against its analytic bound
/// form (constants fitted downstream, never asserted here).
BoundChain bound_chain(const Curve& c, double Q, double delta, int K, const RegimeParams& p,
                       int workers = 1);

struct ExponentFit {
    double slope = 0.0, intercept = 0.0;
    std::vector<double> residuals;
    int dropped = 0;  // records with E = 0
};

/// Least-squares slope of log|E| against log Q; needs >= 4 usable records.
ExponentFit exponent_fit(const std::vector<std::pair<double, double>>& q_and_error);

}  // namespace nearcurve
