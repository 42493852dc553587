#pragma once

#include "nearcurve/curve.hpp"
#include "nearcurve/util.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace nearcurve {

enum class CountMode { Full, DyadicBlock };

const char* mode_name(CountMode m);
CountMode mode_from_name(const std::string& s);

struct CountQuery {
    double Q = 1.0;
    double delta = 0.1;
    CountMode mode = CountMode::Full;
    // Exact value of delta for the rational membership test; when absent the
    // binary expansion of `delta` is used.
    std::optional<BigRat> delta_exact;
};

struct CountResult {
    CountQuery query;
    std::string curve_id;
    long long count = 0;
    std::vector<std::pair<long long, long long>> per_q;  // (q, count_q), optional
    long long boundary_hits = 0;  // samples re-decided in extended precision
    double elapsed_ms = 0.0;
};

/// Exact cardinality of {(a,q)}: q in the query's range, eta*q < a <= xi*q,
/// ||q f(a/q)|| < delta.  Floating evaluation with precision escalation near
/// the threshold; deterministic for any worker count.
CountResult count(const Curve& c, const CountQuery& query, int workers = 1,
                  bool keep_per_q = false);

/// Same contract, every membership decided in exact rational arithmetic.
/// Requires c.exact_form.
CountResult count_exact(const Curve& c, const CountQuery& query, int workers = 1,
                        bool keep_per_q = false);

struct DyadicResult {
    long long total = 0;
    std::vector<long long> blocks;  // block r holds the count at Q/2^r
};

/// N(Q,delta) as the sum of dyadic-block counts at Q/2^r; iteration stops
/// after the first guaranteed-empty block (2^{r-1} > Q).
DyadicResult dyadic_sum(const Curve& c, double Q, double delta, int workers = 1);

/// Integer loop bounds for eta*q < a <= xi*q, computed exactly.
std::pair<long long, long long> a_range(const Curve& c, long long q);

}  // namespace nearcurve
