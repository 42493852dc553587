#pragma once

#include "nearcurve/asymptotics.hpp"
#include "nearcurve/curve.hpp"
#include "nearcurve/lattice.hpp"

#include <string>
#include <vector>

namespace nearcurve {

enum class DeltaKind { Fixed, Power };

struct SweepConfig {
    std::string curve_spec = "parabola";
    CountMode mode = CountMode::Full;
    double Q_base = 256.0;
    double Q_factor = 2.0;
    int Q_count = 5;
    DeltaKind delta_kind = DeltaKind::Fixed;
    double delta_c = 0.1;     // fixed value, or the c of c * Q^{-gamma}
    double delta_gamma = 0.0;
    double theta = 0.9;
    double epsilon = 0.05;
    double regime_c = 1.0;
    int workers = 1;
    bool enforce_admissible = false;
    std::string out_csv;
    std::string cache_dir;
    unsigned long long seed = 0;  // 0 = kDefaultSeed
};

struct SweepRecord {
    std::string curve_id;
    std::string mode;
    double Q = 0.0, delta = 0.0;
    long long count = 0;
    double main = 0.0, error = 0.0;
    std::string regime;  // "one", "two", or "n/a"
    long long K = 0;
    double bound_value = 0.0;
    double ratio = 0.0;  // count / main
    double elapsed_ms = 0.0;
};

/// Curve from a CLI/config spec: a builtin name, `{ name = "..." }`, or
/// `{ poly = [c0, c1, ...], eta = ..., xi = ..., theta = ... }` with
/// rational coefficients written as "p/q" strings.
Curve curve_from_spec(const std::string& spec);

/// Key-value config file (`key = value`, `#` comments); unknown keys rejected.
SweepConfig parse_config(const std::string& path);

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg);

void write_csv(const std::string& path, const std::vector<SweepRecord>& records);
std::vector<SweepRecord> read_csv(const std::string& path);

/// Two-column plot data: kind "ratio" -> (log2 Q, ratio); kind
/// "error-loglog" -> (ln Q, ln |E|), zero-error records omitted with a
/// comment.  One curve per file.
void emit_plot_data(const std::vector<SweepRecord>& records, const std::string& kind,
                    const std::string& path, const std::string& schedule = "");

}  // namespace nearcurve
