#include "nearcurve/lattice.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nearcurve {

namespace {

using i128 = __int128;

struct QRange {
    long long lo = 1, hi = 0;  // inclusive
};

QRange q_range(const CountQuery& query) {
    QRange r;
    if (query.mode == CountMode::Full) {
        if (query.Q < 1.0) throw std::invalid_argument("count: full mode requires Q >= 1");
        r.lo = 1;
        r.hi = (long long)std::floor(query.Q);
    } else {
        r.lo = (long long)std::floor(query.Q) + 1;  // strict q > Q
        r.hi = (long long)std::floor(2.0 * query.Q);
    }
    return r;
}

void check_query(const CountQuery& query) {
    if (!(query.delta > 0.0 && query.delta < 0.5))
        throw std::invalid_argument("count: delta must lie in (0, 1/2)");
    if (!std::isfinite(query.Q) || query.Q <= 0.0)
        throw std::invalid_argument("count: Q must be positive and finite");
}

// Exact membership test ||q f(a/q)|| < delta for polynomial curves.
// f = P/D with integer P; q f(a/q) = num / den with
//   num = sum_j g_j a^j q^{deg-j},  den = D q^{deg-1}.
struct ExactEval {
    std::vector<BigInt> g;
    BigInt D;
    int deg = 0;
    BigInt dp, dq;  // delta = dp/dq, both > 0

    bool i128_ok = false;
    std::vector<long long> g64;
    long long D64 = 1, dp64 = 0, dq64 = 1;

    ExactEval(const Curve& c, const CountQuery& query, long long q_hi) {
        BigInt lcm = 1;
        for (const auto& r : c.exact_form) lcm = boost::multiprecision::lcm(lcm, denominator(r));
        D = lcm;
        for (const auto& r : c.exact_form) g.push_back(numerator(r) * (lcm / denominator(r)));
        deg = (int)g.size() - 1;
        BigRat d = query.delta_exact ? *query.delta_exact : rational_from_double(query.delta);
        dp = numerator(d);
        dq = denominator(d);

        // Fast path sizing: every intermediate must fit comfortably in i128.
        long long amax = std::llabs((long long)std::ceil(std::max(std::fabs(c.eta), std::fabs(c.xi)) * (double)q_hi)) + 2;
        long double bound = 0.0L;
        bool fits = true;
        for (int j = 0; j <= deg; ++j) {
            if (g[j] < std::numeric_limits<long long>::min() ||
                g[j] > std::numeric_limits<long long>::max())
                fits = false;
            bound += fabsl((long double)g[j].convert_to<double>()) * powl((long double)amax, j) *
                     powl((long double)q_hi, deg - j);
        }
        long double denb = (long double)D.convert_to<double>() * powl((long double)q_hi, deg - 1);
        auto fits64 = [](const BigInt& v) {
            return v >= std::numeric_limits<long long>::min() &&
                   v <= std::numeric_limits<long long>::max();
        };
        if (fits && fits64(D) && fits64(dp) && fits64(dq) && bound < 1e33L &&
            denb * (long double)dq.convert_to<double>() < 1e36L &&
            (long double)dp.convert_to<double>() * denb < 1e36L) {
            i128_ok = true;
            for (const auto& v : g) g64.push_back(v.convert_to<long long>());
            D64 = D.convert_to<long long>();
            dp64 = dp.convert_to<long long>();
            dq64 = dq.convert_to<long long>();
        }
    }

    bool member(long long a, long long q) const {
        if (i128_ok) {
            i128 num = 0;
            i128 ap = 1;
            // num = sum g_j a^j q^{deg-j}; accumulate powers of a, powers of
            // q by repeated multiply from the top.
            i128 qp = 1;
            for (int j = 0; j < deg; ++j) qp *= q;  // q^{deg}
            // walk j = 0..deg with qp = q^{deg-j}
            for (int j = 0; j <= deg; ++j) {
                qp /= (j == 0) ? 1 : q;
                num += (i128)g64[j] * ap * qp;
                ap *= a;
            }
            i128 den = (i128)D64;
            for (int j = 0; j < deg - 1; ++j) den *= q;
            i128 r = num % den;
            if (r < 0) r += den;
            i128 m = r <= den - r ? r : den - r;
            return m * (i128)dq64 < (i128)dp64 * den;
        }
        BigInt num = 0, ap = 1;
        BigInt qp = 1;
        for (int j = 0; j < deg; ++j) qp *= q;
        for (int j = 0; j <= deg; ++j) {
            if (j > 0) qp /= q;
            num += g[j] * ap * qp;
            ap *= a;
        }
        BigInt den = D;
        for (int j = 0; j < deg - 1; ++j) den *= q;
        BigInt r = num % den;
        if (r < 0) r += den;
        BigInt m = r <= den - r ? r : den - r;
        return m * dq < dp * den;
    }
};

struct Partial {
    long long cnt = 0;
    long long bhits = 0;
    std::vector<std::pair<long long, long long>> per_q;
};

}  // namespace

const char* mode_name(CountMode m) { return m == CountMode::Full ? "full" : "tilde"; }

CountMode mode_from_name(const std::string& s) {
    if (s == "full") return CountMode::Full;
    if (s == "tilde" || s == "dyadic-block") return CountMode::DyadicBlock;
    throw std::invalid_argument("unknown count mode '" + s + "'");
}

std::pair<long long, long long> a_range(const Curve& c, long long q) {
    // eta*q < a <= xi*q with exact rational endpoints.
    BigInt lo = rat_floor(c.eta_exact * q) + 1;
    BigInt hi = rat_floor(c.xi_exact * q);
    return {lo.convert_to<long long>(), hi.convert_to<long long>()};
}

CountResult count(const Curve& c, const CountQuery& query, int workers, bool keep_per_q) {
    check_query(query);
    auto t0 = std::chrono::steady_clock::now();
    QRange qr = q_range(query);
    CountResult res;
    res.query = query;
    res.curve_id = c.id;
    if (qr.hi < qr.lo) return res;

    std::optional<ExactEval> exact;
    if (c.has_exact()) exact.emplace(c, query, qr.hi);
    const double delta = query.delta;
    const bool poly = !c.poly_d.empty();
    const std::vector<double> pd = c.poly_d;
    const auto f = c.f;

    std::vector<Partial> parts(std::max(1, workers));
    parallel_blocks(qr.lo, qr.hi + 1, workers, [&](long long lo, long long hi, int block) {
        Partial& p = parts[block];
        for (long long q = lo; q < hi; ++q) {
            auto [amin, amax] = a_range(c, q);
            const double qd = (double)q;
            const double inv = 1.0 / qd;
            long long cq = 0;
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
                double d = std::fabs(v - std::nearbyint(v));
                if (std::fabs(d - delta) <= 1e-9 * std::max(1.0, std::fabs(v))) {
                    // too close to the threshold for doubles: escalate
                    ++p.bhits;
                    bool in;
                    if (exact) {
                        in = exact->member(a, q);
                    } else {
                        long double vl = (long double)q * eval_extended_ld(c, (long double)a / q);
                        in = dist_to_int_ld(vl) < (long double)delta;
                    }
                    if (in) ++cq;
                } else if (d < delta) {
                    ++cq;
                }
            }
            p.cnt += cq;
            if (keep_per_q) p.per_q.emplace_back(q, cq);
        }
    });
    for (auto& p : parts) {
        res.count += p.cnt;
        res.boundary_hits += p.bhits;
        if (keep_per_q)
            res.per_q.insert(res.per_q.end(), p.per_q.begin(), p.per_q.end());
    }
    res.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

CountResult count_exact(const Curve& c, const CountQuery& query, int workers, bool keep_per_q) {
    check_query(query);
    if (!c.has_exact())
        throw std::invalid_argument("count_exact: curve has no exact polynomial form");
    auto t0 = std::chrono::steady_clock::now();
    QRange qr = q_range(query);
    CountResult res;
    res.query = query;
    res.curve_id = c.id;
    if (qr.hi < qr.lo) return res;
    ExactEval exact(c, query, qr.hi);

    std::vector<Partial> parts(std::max(1, workers));
    parallel_blocks(qr.lo, qr.hi + 1, workers, [&](long long lo, long long hi, int block) {
        Partial& p = parts[block];
        for (long long q = lo; q < hi; ++q) {
            auto [amin, amax] = a_range(c, q);
            long long cq = 0;
            for (long long a = amin; a <= amax; ++a)
                if (exact.member(a, q)) ++cq;
            p.cnt += cq;
            if (keep_per_q) p.per_q.emplace_back(q, cq);
        }
    });
    for (auto& p : parts) {
        res.count += p.cnt;
        if (keep_per_q)
            res.per_q.insert(res.per_q.end(), p.per_q.begin(), p.per_q.end());
    }
    res.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

DyadicResult dyadic_sum(const Curve& c, double Q, double delta, int workers) {
    DyadicResult out;
    double pow2 = 1.0;  // 2^{r-1}
    for (int r = 1;; ++r) {
        CountQuery q;
        q.Q = Q / std::pow(2.0, r);
        q.delta = delta;
        q.mode = CountMode::DyadicBlock;
        long long block = count(c, q, workers).count;
        out.blocks.push_back(block);
        out.total += block;
        if (pow2 > Q) break;  // 2^{r-1} > Q: this and all later blocks are empty
        pow2 *= 2.0;
    }
    return out;
}

}  // namespace nearcurve
