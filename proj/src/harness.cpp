#include "nearcurve/harness.hpp"

#include "nearcurve/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nearcurve {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string unquote(std::string s) {
    s = trim(s);
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_top_level(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char ch : s) {
        if (ch == '[' || ch == '{') ++depth;
        if (ch == ']' || ch == '}') --depth;
        if (ch == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!trim(cur).empty()) out.push_back(cur);
    return out;
}

// FNV-1a, for cache file names.
std::string fnv_hex(const std::string& s) {
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Curve curve_from_spec(const std::string& raw) {
    std::string spec = trim(raw);
    if (spec.empty()) throw std::invalid_argument("curve spec is empty");
    if (spec.front() != '{') return builtin(spec);
    if (spec.back() != '}') throw std::invalid_argument("curve spec: unbalanced braces");
    std::string body = spec.substr(1, spec.size() - 2);
    std::string name;
    std::vector<BigRat> poly;
    BigRat eta, xi;
    bool have_eta = false, have_xi = false;
    double theta = 0.9;
    for (const auto& entry : split_top_level(body, ',')) {
        auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("curve spec: expected key = value in '" + entry + "'");
        std::string key = trim(entry.substr(0, eq));
        std::string val = trim(entry.substr(eq + 1));
        if (key == "name") {
            name = unquote(val);
        } else if (key == "poly") {
            if (val.size() < 2 || val.front() != '[' || val.back() != ']')
                throw std::invalid_argument("curve spec: poly must be a [..] list");
            for (const auto& c : split_top_level(val.substr(1, val.size() - 2), ','))
                poly.push_back(parse_rational(unquote(c)));
        } else if (key == "eta") {
            eta = parse_rational(unquote(val));
            have_eta = true;
        } else if (key == "xi") {
            xi = parse_rational(unquote(val));
            have_xi = true;
        } else if (key == "theta") {
            theta = std::stod(val);
        } else {
            throw std::invalid_argument("curve spec: unknown key '" + key + "'");
        }
    }
    if (!name.empty()) return builtin(name);
    if (poly.empty() || !have_eta || !have_xi)
        throw std::invalid_argument("curve spec: need poly, eta and xi");
    return make_poly_curve(std::move(poly), eta, xi, theta);
}

SweepConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    SweepConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "curve") cfg.curve_spec = val;
        else if (key == "mode") cfg.mode = mode_from_name(unquote(val));
        else if (key == "Q.base") cfg.Q_base = std::stod(val);
        else if (key == "Q.factor") cfg.Q_factor = std::stod(val);
        else if (key == "Q.count") cfg.Q_count = std::stoi(val);
        else if (key == "delta.kind") {
            std::string v = unquote(val);
            if (v == "fixed") cfg.delta_kind = DeltaKind::Fixed;
            else if (v == "power") cfg.delta_kind = DeltaKind::Power;
            else throw std::runtime_error("delta.kind must be fixed or power");
        }
        else if (key == "delta.c") cfg.delta_c = std::stod(val);
        else if (key == "delta.gamma") cfg.delta_gamma = std::stod(val);
        else if (key == "theta") cfg.theta = std::stod(val);
        else if (key == "epsilon") cfg.epsilon = std::stod(val);
        else if (key == "regime_c") cfg.regime_c = std::stod(val);
        else if (key == "workers") cfg.workers = std::stoi(val);
        else if (key == "enforce_admissible") cfg.enforce_admissible = val == "1" || val == "true";
        else if (key == "out") cfg.out_csv = unquote(val);
        else if (key == "cache_dir") cfg.cache_dir = unquote(val);
        else if (key == "seed") cfg.seed = std::stoull(val);
        else throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return cfg;
}

namespace {

std::string cache_key(const std::string& curve_id, CountMode mode, double Q, double delta) {
    std::ostringstream os;
    os << curve_id << '|' << mode_name(mode) << '|' << fmt_double(Q) << '|' << fmt_double(delta)
       << '|' << kCodeVersion;
    return os.str();
}

bool cache_load(const std::string& dir, const std::string& key, SweepRecord& rec) {
    if (dir.empty()) return false;
    std::filesystem::path p = std::filesystem::path(dir) / (fnv_hex(key) + ".json");
    std::ifstream in(p);
    if (!in) return false;
    nlohmann::json j;
    in >> j;
    if (j.value("key", "") != key) return false;  // hash collision guard
    rec.curve_id = j["curve_id"];
    rec.mode = j["mode"];
    rec.Q = j["Q"];
    rec.delta = j["delta"];
    rec.count = j["count"];
    rec.main = j["main"];
    rec.error = j["error"];
    rec.regime = j["regime"];
    rec.K = j["K"];
    rec.bound_value = j["bound_value"];
    rec.ratio = j["ratio"];
    rec.elapsed_ms = j["elapsed_ms"];
    return true;
}

void cache_store(const std::string& dir, const std::string& key, const SweepRecord& rec) {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    nlohmann::json j;
    j["key"] = key;
    j["curve_id"] = rec.curve_id;
    j["mode"] = rec.mode;
    j["Q"] = rec.Q;
    j["delta"] = rec.delta;
    j["count"] = rec.count;
    j["main"] = rec.main;
    j["error"] = rec.error;
    j["regime"] = rec.regime;
    j["K"] = rec.K;
    j["bound_value"] = rec.bound_value;
    j["ratio"] = rec.ratio;
    j["elapsed_ms"] = rec.elapsed_ms;
    std::filesystem::path p = std::filesystem::path(dir) / (fnv_hex(key) + ".json");
    std::ofstream out(p);
    out << j.dump(2) << "\n";
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
    Curve c = curve_from_spec(cfg.curve_spec);
    std::string cache_dir = cfg.cache_dir;
    if (cache_dir.empty())
        if (const char* env = std::getenv("NEARCURVE_CACHE_DIR")) cache_dir = env;

    std::vector<SweepRecord> records;
    double Q = cfg.Q_base;
    if (cfg.Q_count > 1 && !(cfg.Q_factor > 1.0))
        throw std::invalid_argument("run_sweep: Q grid must be strictly increasing");
    for (int i = 0; i < cfg.Q_count; ++i, Q *= cfg.Q_factor) {
        double delta = cfg.delta_kind == DeltaKind::Fixed
                           ? cfg.delta_c
                           : cfg.delta_c * std::pow(Q, -cfg.delta_gamma);
        RegimeParams rp{cfg.theta, cfg.epsilon, Q, delta, cfg.regime_c};
        if (cfg.enforce_admissible && !admissible_delta(rp))
            throw std::invalid_argument("run_sweep: (Q, delta) fails the admissibility bound");
        std::string key = cache_key(c.id, cfg.mode, Q, delta);
        SweepRecord rec;
        if (!cache_load(cache_dir, key, rec)) {
            CountQuery query;
            query.Q = Q;
            query.delta = delta;
            query.mode = cfg.mode;
            CountResult cr = count(c, query, cfg.workers);
            rec.curve_id = c.id;
            rec.mode = mode_name(cfg.mode);
            rec.Q = Q;
            rec.delta = delta;
            rec.count = cr.count;
            rec.main = main_term(c.eta, c.xi, Q, delta, cfg.mode);
            rec.error = (double)cr.count - rec.main;
            try {
                KChoice kc = choose_K(rp);
                rec.regime = regime_name(kc.regime);
                rec.K = kc.K;
                rec.bound_value = error_bound(rp);
            } catch (const std::exception&) {
                rec.regime = "n/a";  // per-point failure recorded, sweep continues
                rec.K = 0;
                rec.bound_value = std::numeric_limits<double>::quiet_NaN();
            }
            rec.ratio = rec.main > 0 ? (double)cr.count / rec.main
                                     : std::numeric_limits<double>::quiet_NaN();
            rec.elapsed_ms = cr.elapsed_ms;
            cache_store(cache_dir, key, rec);
        }
        records.push_back(rec);
    }
    if (!cfg.out_csv.empty()) write_csv(cfg.out_csv, records);
    return records;
}

void write_csv(const std::string& path, const std::vector<SweepRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "curve_id,mode,Q,delta,count,main,error,regime,K,bound_value,ratio,elapsed_ms\n";
    for (const auto& r : records) {
        out << r.curve_id << ',' << r.mode << ',' << fmt_double(r.Q) << ',' << fmt_double(r.delta)
            << ',' << r.count << ',' << fmt_double(r.main) << ',' << fmt_double(r.error) << ','
            << r.regime << ',' << r.K << ',' << fmt_double(r.bound_value) << ','
            << fmt_double(r.ratio) << ',' << fmt_double(r.elapsed_ms) << '\n';
    }
}

std::vector<SweepRecord> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
    std::vector<SweepRecord> out;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto cols = split_top_level(line, ',');
        if (cols.size() != 12) throw std::runtime_error("bad CSV row: " + line);
        SweepRecord r;
        r.curve_id = cols[0];
        r.mode = cols[1];
        r.Q = std::stod(cols[2]);
        r.delta = std::stod(cols[3]);
        r.count = std::stoll(cols[4]);
        r.main = std::stod(cols[5]);
        r.error = std::stod(cols[6]);
        r.regime = cols[7];
        r.K = std::stoll(cols[8]);
        r.bound_value = std::stod(cols[9]);
        r.ratio = std::stod(cols[10]);
        r.elapsed_ms = std::stod(cols[11]);
        out.push_back(r);
    }
    return out;
}

void emit_plot_data(const std::vector<SweepRecord>& records, const std::string& kind,
                    const std::string& path, const std::string& schedule) {
    if (records.empty()) throw std::invalid_argument("emit_plot_data: no records");
    for (const auto& r : records)
        if (r.curve_id != records.front().curve_id)
            throw std::invalid_argument("emit_plot_data: one curve per plot file");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "# curve=" << records.front().curve_id << " kind=" << kind;
    if (!schedule.empty()) out << " schedule=" << schedule;
    out << "\n";
    if (kind == "ratio") {
        for (const auto& r : records)
            out << fmt_double(std::log2(r.Q)) << ' ' << fmt_double(r.ratio) << '\n';
    } else if (kind == "error-loglog") {
        for (const auto& r : records) {
            if (r.error == 0.0) {
                out << "# omitted Q=" << fmt_double(r.Q) << " (E = 0)\n";
                continue;
            }
            out << fmt_double(std::log(r.Q)) << ' ' << fmt_double(std::log(std::fabs(r.error)))
                << '\n';
        }
    } else {
        throw std::invalid_argument("emit_plot_data: kind must be ratio or error-loglog");
    }
}

}  // namespace nearcurve
