#include "nearcurve/acceptance.hpp"

#include "nearcurve/asymptotics.hpp"
#include "nearcurve/curve.hpp"
#include "nearcurve/harness.hpp"
#include "nearcurve/lattice.hpp"
#include "nearcurve/oscillatory.hpp"
#include "nearcurve/selberg.hpp"
#include "nearcurve/util.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace nearcurve {

namespace {

using Float50 = boost::multiprecision::cpp_bin_float_50;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

void note(AcceptanceReport& rep, const std::string& s) { rep.lines.push_back(s); }

// 1. Dyadic identity: N(Q,delta) equals the sum of dyadic-block counts.
AcceptanceReport crit_dyadic(int workers) {
    AcceptanceReport rep{"dyadic", true, {}};
    Curve c = builtin("parabola");
    for (double delta : {0.05, 0.2}) {
        CountQuery q{4096.0, delta, CountMode::Full, {}};
        long long full = count(c, q, workers).count;
        DyadicResult dy = dyadic_sum(c, 4096.0, delta, workers);
        bool ok = dy.total == full;
        rep.pass = rep.pass && ok;
        note(rep, "delta=" + fmt(delta) + ": full=" + std::to_string(full) +
                      " dyadic=" + std::to_string(dy.total) + (ok ? " (equal)" : " (MISMATCH)"));
    }
    return rep;
}

std::vector<SweepRecord> ratio_sweep(CountMode mode, int lo2, int hi2, int workers) {
    Curve c = builtin("parabola");
    std::vector<SweepRecord> recs;
    for (int e = lo2; e <= hi2; ++e) {
        double Q = std::pow(2.0, e);
        double delta = std::pow(Q, -0.4);
        CountQuery q{Q, delta, mode, {}};
        long long n = count(c, q, workers).count;
        SweepRecord r;
        r.curve_id = c.id;
        r.mode = mode_name(mode);
        r.Q = Q;
        r.delta = delta;
        r.count = n;
        r.main = main_term(c.eta, c.xi, Q, delta, mode);
        r.error = (double)n - r.main;
        r.ratio = (double)n / ((c.xi - c.eta) * delta * Q * Q);
        recs.push_back(r);
    }
    return recs;
}

// 2. N(Q, Q^{-2/5}) / ((xi-eta) delta Q^2) -> 1.
AcceptanceReport crit_full_asymptotic(int workers) {
    AcceptanceReport rep{"full-asymptotic", true, {}};
    auto recs = ratio_sweep(CountMode::Full, 8, 15, workers);
    for (const auto& r : recs)
        note(rep, "Q=2^" + fmt(std::log2(r.Q)) + " ratio=" + fmt(r.ratio));
    double final_ratio = recs.back().ratio;
    bool near = std::fabs(final_ratio - 1.0) <= 0.10;
    int inversions = 0;
    for (size_t i = recs.size() - 5; i + 1 < recs.size(); ++i) {
        double a = std::fabs(recs[i].ratio - 1.0), b = std::fabs(recs[i + 1].ratio - 1.0);
        if (b > a) ++inversions;
    }
    bool trend = inversions <= 1;
    rep.pass = near && trend;
    note(rep, "final |ratio-1|=" + fmt(std::fabs(final_ratio - 1.0)) +
                  " (<=0.1: " + (near ? "yes" : "NO") + "), inversions over last doublings=" +
                  std::to_string(inversions) + " (<=1: " + (trend ? "yes" : "NO") + ")");
    return rep;
}

// 3. Ntilde(Q, Q^{-2/5}) / ((xi-eta) delta Q^2) -> 3.
AcceptanceReport crit_block_asymptotic(int workers) {
    AcceptanceReport rep{"block-asymptotic", true, {}};
    auto recs = ratio_sweep(CountMode::DyadicBlock, 8, 15, workers);
    for (const auto& r : recs)
        note(rep, "Q=2^" + fmt(std::log2(r.Q)) + " ratio=" + fmt(r.ratio));
    double final_ratio = recs.back().ratio;
    rep.pass = std::fabs(final_ratio - 3.0) <= 0.30;
    note(rep, "final ratio=" + fmt(final_ratio) + " (within 10% of 3: " +
                  (rep.pass ? "yes" : "NO") + ")");
    return rep;
}

// 4. Selberg property suite over the (delta, K) matrix.
AcceptanceReport crit_selberg(int) {
    AcceptanceReport rep{"selberg", true, {}};
    for (double delta : {0.01, 0.1, 0.3}) {
        for (int K : {10, 100, 1000}) {
            for (auto sign : {SelbergSign::Majorant, SelbergSign::Minorant}) {
                auto p = selberg_build(sign, K, delta);
                auto v = selberg_verify(p, 100000);
                rep.pass = rep.pass && v.ok;
                note(rep, std::string(sign == SelbergSign::Majorant ? "S+" : "S-") + " K=" +
                              std::to_string(K) + " delta=" + fmt(delta) + ": " +
                              (v.ok ? "ok" : "FAIL") +
                              (v.negative_mass ? " (negative minorant mass regime)" : ""));
                if (!v.ok)
                    for (const auto& f : v.failures) note(rep, "  " + f);
            }
        }
    }
    return rep;
}

// 5. Sum S- <= Ntilde <= sum S+ at Q=512, delta=0.1.
AcceptanceReport crit_sandwich(int workers) {
    AcceptanceReport rep{"sandwich", true, {}};
    Curve c = builtin("parabola");
    RegimeParams rp{c.theta, 0.05, 512.0, 0.1, 1.0};
    long long K = std::min(choose_K(rp).K, 256LL);
    auto sc = sandwich_counts(c, 512.0, 0.1, (int)K, workers);
    bool lo = sc.lower <= (double)sc.count + 1e-6;
    bool hi = (double)sc.count <= sc.upper + 1e-6;
    rep.pass = lo && hi;
    note(rep, "K=" + std::to_string(K) + " lower=" + fmt(sc.lower) + " count=" +
                  std::to_string(sc.count) + " upper=" + fmt(sc.upper) +
                  (rep.pass ? " (bracketed)" : " (NOT bracketed)"));
    return rep;
}

// 6. Floating count equals the exact-rational count on random queries.
AcceptanceReport crit_oracle(int workers) {
    AcceptanceReport rep{"oracle", true, {}};
    std::mt19937_64 rng(kDefaultSeed);
    std::uniform_int_distribution<long long> qdist(16, 2048);
    std::uniform_real_distribution<double> ddist(0.01, 0.45);
    for (int i = 0; i < 20; ++i) {
        Curve c = builtin(i % 2 == 0 ? "parabola" : "cubic");
        CountQuery q;
        q.Q = (double)qdist(rng);
        q.delta = ddist(rng);
        q.mode = CountMode::Full;
        CountResult fl = count(c, q, workers);
        CountResult ex = count_exact(c, q, workers);
        bool ok = fl.count == ex.count;
        rep.pass = rep.pass && ok;
        note(rep, c.id + " Q=" + fmt(q.Q) + " delta=" + fmt(q.delta) + ": float=" +
                      std::to_string(fl.count) + " exact=" + std::to_string(ex.count) +
                      " boundary_hits=" + std::to_string(fl.boundary_hits) +
                      (ok ? "" : " MISMATCH"));
    }
    return rep;
}

// 7. Second-derivative-test scaling of |osc_integral| sqrt(q|k|) / q.
AcceptanceReport crit_scaling(int workers) {
    AcceptanceReport rep{"scaling", true, {}};
    Curve c = builtin("parabola");
    auto battery = [&](const std::vector<long long>& qs) {
        std::vector<double> stats;
        std::vector<std::pair<long long, long long>> cases;
        for (long long k = 1; k <= 50; ++k)
            for (long long q : qs) cases.emplace_back(k, q);
        stats.resize(cases.size());
        parallel_blocks(0, (long long)cases.size(), workers, [&](long long lo, long long hi, int) {
            for (long long i = lo; i < hi; ++i) {
                auto [k, q] = cases[i];
                long long h = (long long)std::llround((double)k * c.f1(0.5 * (c.eta + c.xi)));
                auto r = osc_integral(c, k, h, q, c.eta, c.xi);
                stats[i] = std::abs(r.value) * std::sqrt((double)(q * k)) / (double)q;
            }
        });
        return stats;
    };
    std::vector<long long> qa{1009, 1259, 1583, 1999};
    std::vector<long long> qb{4036, 5036, 6332, 7996};
    auto sa = battery(qa);
    auto sb = battery(qb);
    auto maxv = [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); };
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    double ma = maxv(sa), med = median(sa), mb = maxv(sb);
    bool spread = ma / med <= 3.0;
    bool stable = mb < 2.0 * ma && ma < 2.0 * mb;
    rep.pass = spread && stable;
    note(rep, "battery max=" + fmt(ma) + " median=" + fmt(med) + " max/median=" + fmt(ma / med) +
                  " (<=3: " + (spread ? "yes" : "NO") + ")");
    note(rep, "q x4 battery max=" + fmt(mb) + " change factor=" + fmt(mb / ma) + " (<2x: " +
                  (stable ? "yes" : "NO") + ")");
    return rep;
}

// 8. Slope of log|E| vs log Q at fixed delta stays below the bound slope.
AcceptanceReport crit_exponent(int workers) {
    AcceptanceReport rep{"exponent", true, {}};
    Curve c = builtin("parabola");
    std::vector<std::pair<double, double>> pts;
    for (int e = 10; e <= 15; ++e) {
        double Q = std::pow(2.0, e);
        double E = error_term(c, Q, 0.1, CountMode::DyadicBlock, workers);
        pts.emplace_back(Q, E);
        note(rep, "Q=2^" + std::to_string(e) + " E=" + fmt(E));
    }
    auto fit = exponent_fit(pts);
    rep.pass = fit.slope <= 1.85;
    note(rep, "fitted slope=" + fmt(fit.slope) + " (<=1.85: " + (rep.pass ? "yes" : "NO") +
                  ", main-term slope is 2)");
    return rep;
}

// 9. Bound-chain step ratios stay finite and stable when Q doubles.
AcceptanceReport crit_chain(int workers) {
    AcceptanceReport rep{"chain", true, {}};
    Curve c = builtin("parabola");
    RegimeParams rp{c.theta, 0.05, 0.0, 0.0, 1.0};
    auto max_ratios = [&](double Q, int K) {
        std::vector<double> mr;
        for (double delta : {0.1, 0.2}) {
            RegimeParams p = rp;
            p.Q = Q;
            p.delta = delta;
            BoundChain bc = bound_chain(c, Q, delta, K, p, workers);
            if (mr.empty()) mr.assign(bc.steps.size(), 0.0);
            for (size_t i = 0; i < bc.steps.size(); ++i) {
                if (!std::isfinite(bc.steps[i].ratio)) rep.pass = false;
                mr[i] = std::max(mr[i], bc.steps[i].ratio);
            }
            std::ostringstream os;
            os << "Q=" << Q << " K=" << K << " delta=" << delta << ":";
            for (const auto& s : bc.steps) os << ' ' << s.name << "=" << fmt(s.ratio);
            note(rep, os.str());
        }
        return mr;
    };
    auto a = max_ratios(128.0, 8);
    auto b = max_ratios(256.0, 16);
    for (size_t i = 0; i < a.size(); ++i) {
        bool ok = b[i] <= 2.0 * a[i];
        rep.pass = rep.pass && ok;
        if (!ok)
            note(rep, "step " + std::to_string(i) + " ratio grew more than 2x: " + fmt(a[i]) +
                          " -> " + fmt(b[i]));
    }
    note(rep, std::string("step ratios finite and stable under Q doubling: ") +
                  (rep.pass ? "yes" : "NO"));
    return rep;
}

// 10. choose_K against a 50-digit evaluation; footnote regime for theta <= 1/2.
AcceptanceReport crit_regimeK(int) {
    AcceptanceReport rep{"regimeK", true, {}};
    std::mt19937_64 rng(kDefaultSeed);
    std::uniform_real_distribution<double> uth(0.05, 0.95);
    std::uniform_real_distribution<double> ulq(2.0, 6.0);    // Q = 10^x
    std::uniform_real_distribution<double> uld(-6.0, -0.31); // delta = 10^x
    int mismatches = 0;
    for (int i = 0; i < 50; ++i) {
        RegimeParams p;
        p.theta = uth(rng);
        p.epsilon = 0.05;
        p.Q = std::pow(10.0, ulq(rng));
        p.delta = std::pow(10.0, uld(rng));
        KChoice kc = choose_K(p);
        Float50 Q(p.Q), d(p.delta), th(p.theta);
        Float50 Kf;
        if (kc.regime == Regime::One)
            Kf = pow(d, Float50(-2) / 3) * pow(Q, Float50(1) / 3) * pow(log(Q), Float50(-2) / 3);
        else
            Kf = pow(d, Float50(-2) / (5 - th)) * pow(Q, (1 + th) / (5 - th));
        long long oracle = (long long)floor(Kf).convert_to<double>();
        if (oracle != kc.K) {
            ++mismatches;
            note(rep, "mismatch at theta=" + fmt(p.theta) + " Q=" + fmt(p.Q) + " delta=" +
                          fmt(p.delta) + ": K=" + std::to_string(kc.K) + " oracle=" +
                          std::to_string(oracle));
        }
    }
    bool k_ok = mismatches == 0;
    note(rep, "choose_K matches 50-digit oracle on 50 samples: " + std::string(k_ok ? "yes" : "NO"));

    int regime_one_hits = 0;
    std::uniform_real_distribution<double> uth2(0.05, 0.5);
    std::uniform_real_distribution<double> ulq2(3.0, 6.0);
    std::uniform_real_distribution<double> ud2(1e-4, 0.499);
    for (int i = 0; i < 50; ++i) {
        RegimeParams p;
        p.theta = uth2(rng);
        p.Q = std::pow(10.0, ulq2(rng));
        p.delta = ud2(rng);
        if (regime(p) == Regime::One) ++regime_one_hits;
    }
    bool foot_ok = regime_one_hits == 0;
    note(rep, "theta <= 1/2 battery always selects regime two: " +
                  std::string(foot_ok ? "yes" : "NO"));
    rep.pass = k_ok && foot_ok;
    return rep;
}

struct Suite {
    const char* name;
    AcceptanceReport (*fn)(int);
};

const Suite kSuites[] = {
    {"dyadic", crit_dyadic},       {"full-asymptotic", crit_full_asymptotic},
    {"block-asymptotic", crit_block_asymptotic}, {"selberg", crit_selberg},
    {"sandwich", crit_sandwich},   {"oracle", crit_oracle},
    {"scaling", crit_scaling},     {"exponent", crit_exponent},
    {"chain", crit_chain},         {"regimeK", crit_regimeK},
};

}  // namespace

std::vector<std::string> acceptance_suites() {
    std::vector<std::string> out;
    for (const auto& s : kSuites) out.push_back(s.name);
    return out;
}

AcceptanceReport run_acceptance(const std::string& suite, int workers) {
    if (suite == "all") {
        AcceptanceReport all{"all", true, {}};
        for (const auto& s : kSuites) {
            AcceptanceReport r = s.fn(workers);
            all.pass = all.pass && r.pass;
            all.lines.push_back(std::string(r.pass ? "PASS " : "FAIL ") + r.suite);
            for (const auto& l : r.lines) all.lines.push_back("  " + l);
        }
        return all;
    }
    for (const auto& s : kSuites)
        if (suite == s.name) return s.fn(workers);
    throw std::invalid_argument("unknown acceptance suite '" + suite + "'");
}

}  // namespace nearcurve
