#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace nearcurve {

// Seed used by every sampled grid / random battery in the project.
inline constexpr std::uint64_t kDefaultSeed = 0x5eedc0de2024ull;

// Stamp used to key cached counts; bump when counting semantics change.
inline constexpr const char* kCodeVersion = "nearcurve-1";

/// Distance from x to the nearest integer, in [0, 1/2].
inline double dist_to_int(double x) {
    if (!std::isfinite(x))
        throw std::invalid_argument("dist_to_int: non-finite input");
    return std::fabs(x - std::nearbyint(x));
}

inline long double dist_to_int_ld(long double x) {
    return fabsl(x - nearbyintl(x));
}

// Kahan compensated accumulator.
struct Kahan {
    double sum = 0.0;
    double c = 0.0;
    void add(double v) {
        double y = v - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

// Runs body(lo_i, hi_i, block_index) over a fixed partition of [lo, hi)
// into `workers` contiguous blocks.  The partition depends only on the
// range and worker count, so per-block results can be reduced in block
// order for a schedule-independent total.
template <class F>
void parallel_blocks(long long lo, long long hi, int workers, F body) {
    if (hi <= lo) return;
    long long n = hi - lo;
    if (workers < 1) workers = 1;
    if (workers > n) workers = static_cast<int>(n);
    if (workers == 1) {
        body(lo, hi, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    long long chunk = n / workers, rem = n % workers;
    long long start = lo;
    for (int b = 0; b < workers; ++b) {
        long long len = chunk + (b < rem ? 1 : 0);
        long long a = start, z = start + len;
        start = z;
        pool.emplace_back([=, &body] { body(a, z, b); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace nearcurve
