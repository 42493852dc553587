// nearcurve: count rational points near a planar curve and run the related
// analytic diagnostics.  Exit codes: 0 pass, 1 check failure, 2 usage error.

#include "nearcurve/acceptance.hpp"
#include "nearcurve/asymptotics.hpp"
#include "nearcurve/curve.hpp"
#include "nearcurve/harness.hpp"
#include "nearcurve/lattice.hpp"
#include "nearcurve/oscillatory.hpp"
#include "nearcurve/selberg.hpp"
#include "nearcurve/util.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using json = nlohmann::json;
using namespace nearcurve;

namespace {

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file " + path);
    return file;
}

int cmd_count(const std::string& curve_spec, double Q, double delta, const std::string& mode,
              bool per_q, bool exact, int workers, const std::string& out) {
    Curve c = curve_from_spec(curve_spec);
    CountQuery q;
    q.Q = Q;
    q.delta = delta;
    q.mode = mode_from_name(mode);
    CountResult r = exact ? count_exact(c, q, workers, per_q) : count(c, q, workers, per_q);
    std::ofstream file;
    std::ostream& os = open_out(out, file);
    char buf[256];
    os << "curve_id,mode,Q,delta,count,boundary_hits,elapsed_ms\n";
    std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%.17g,%lld,%lld,%.3f\n", c.id.c_str(),
                  mode_name(q.mode), Q, delta, r.count, r.boundary_hits, r.elapsed_ms);
    os << buf;
    if (per_q) {
        os << "# per_q: q,count_q\n";
        for (auto& [qq, n] : r.per_q) os << qq << ',' << n << '\n';
    }
    return 0;
}

int cmd_selberg(int K, double delta, const std::string& sign_name, const std::string& verify,
                const std::string& dump) {
    SelbergSign sign = sign_name == "plus" ? SelbergSign::Majorant : SelbergSign::Minorant;
    SelbergPolynomial p = selberg_build(sign, K, delta);
    if (!dump.empty()) {
        std::ofstream f(dump);
        if (!f) throw std::runtime_error("cannot open " + dump);
        f << "k,re,im\n";
        char buf[128];
        for (int k = -K; k <= K; ++k) {
            auto ck = p.coeff(k);
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", k, ck.real(), ck.imag());
            f << buf;
        }
    }
    if (!verify.empty()) {
        int grid = 1000;
        if (verify.rfind("grid=", 0) == 0)
            grid = std::stoi(verify.substr(5));
        else
            throw CLI::ValidationError("--verify expects grid=N");
        auto rep = selberg_verify(p, grid);
        std::cout << "sandwich=" << rep.sandwich_ok << " integral=" << rep.integral_ok
                  << " domination=" << rep.domination_ok << " proximity=" << rep.proximity_ok
                  << " negative_mass=" << rep.negative_mass
                  << " worst_violation=" << rep.worst_sandwich_violation << '\n';
        for (const auto& f : rep.failures) std::cout << "failure: " << f << '\n';
        if (!rep.ok) return 1;
    }
    return 0;
}

int cmd_oscdiag(const std::string& curve_spec, long long k, long long q, long long h,
                bool has_h, const std::string& op) {
    Curve c = curve_from_spec(curve_spec);
    json rec;
    rec["op"] = op;
    rec["inputs"] = {{"curve", c.id}, {"k", k}, {"q", q}};
    if (has_h) rec["inputs"]["h"] = h;
    if (op == "expsum") {
        auto v = exp_sum(c, k, q);
        rec["value_re"] = v.real();
        rec["value_im"] = v.imag();
        auto b = index_bounds(c, k);
        rec["diagnostics"] = {{"H_minus", b.H_minus}, {"H_plus", b.H_plus}};
    } else if (op == "integral") {
        if (!has_h) throw CLI::ValidationError("--op integral requires --h");
        auto r = osc_integral(c, k, h, q, c.eta, c.xi);
        rec["value_re"] = r.value.real();
        rec["value_im"] = r.value.imag();
        rec["diagnostics"] = {{"err_estimate", r.err_estimate},
                              {"converged", r.converged},
                              {"evals", r.evals}};
    } else if (op == "stationary") {
        if (!has_h) throw CLI::ValidationError("--op stationary requires --h");
        auto sp = stationary_point(c, k, h);
        rec["value_re"] = sp.beta_h;
        rec["value_im"] = 0.0;
        rec["diagnostics"] = {{"lambda_h", sp.lambda_h}};
    } else if (op == "census") {
        // k is read as the coefficient cap K, q as the block parameter Q.
        long long n = small_lambda_census(c, (int)k, (double)q);
        rec["value_re"] = (double)n;
        rec["value_im"] = 0.0;
        rec["diagnostics"] = {{"threshold", 1.0 / (double)q}};
    } else {
        throw CLI::ValidationError("unknown --op " + op);
    }
    std::cout << rec.dump(2) << '\n';
    return 0;
}

int cmd_analyze(const std::string& curve_spec, double Q, double delta, double theta,
                double epsilon, double regime_c, const std::string& mode, int K_arg,
                int workers, const std::string& op) {
    Curve c = curve_from_spec(curve_spec);
    RegimeParams p;
    p.theta = theta >= 0 ? theta : c.theta;
    p.epsilon = epsilon;
    p.Q = Q;
    p.delta = delta;
    p.regime_c = regime_c;
    json rec;
    rec["op"] = op;
    rec["inputs"] = {{"curve", c.id}, {"Q", Q},          {"delta", delta},
                     {"theta", p.theta}, {"epsilon", epsilon}, {"mode", mode}};
    CountMode m = mode_from_name(mode);
    if (op == "mainterm") {
        rec["value"] = main_term(c.eta, c.xi, Q, delta, m);
    } else if (op == "error") {
        rec["value"] = error_term(c, Q, delta, m, workers);
    } else if (op == "regime") {
        rec["value"] = regime_name(regime(p));
        rec["threshold"] = regime_threshold(Q, p.theta);
    } else if (op == "chooseK") {
        KChoice kc = choose_K(p);
        rec["value"] = kc.K;
        rec["regime"] = regime_name(kc.regime);
        rec["delta_K_ok"] = kc.delta_K_ok;
        rec["K_cap_ok"] = kc.K_cap_ok;
    } else if (op == "bound") {
        rec["value"] = error_bound(p);
        rec["regime"] = regime_name(regime(p));
        rec["admissible_delta"] = admissible_delta(p);
    } else if (op == "chain") {
        int K = K_arg > 0 ? K_arg : (int)std::min<long long>(choose_K(p).K, 64);
        BoundChain bc = bound_chain(c, Q, delta, K, p, workers);
        rec["K"] = K;
        rec["pair_count"] = bc.pair_count;
        rec["N0_plus"] = bc.N0_plus;
        rec["N0_minus"] = bc.N0_minus;
        rec["N"] = {bc.N1, bc.N2, bc.N3, bc.N4, bc.N5};
        json steps = json::array();
        for (const auto& s : bc.steps)
            steps.push_back({{"name", s.name},
                             {"diff", s.diff},
                             {"bound_logK", s.bound_logK},
                             {"bound_logQ", s.bound_logQ},
                             {"ratio", s.ratio}});
        rec["steps"] = steps;
    } else {
        throw CLI::ValidationError("unknown --op " + op);
    }
    std::cout << rec.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rational points near planar curves: counting and diagnostics"};
    app.require_subcommand(1);

    // count
    auto* sc_count = app.add_subcommand("count", "exact neighborhood count");
    std::string cnt_curve = "parabola", cnt_mode = "full", cnt_out;
    double cnt_Q = 100.0, cnt_delta = 0.1;
    bool cnt_perq = false, cnt_exact = false;
    int cnt_workers = 1;
    sc_count->add_option("--curve", cnt_curve);
    sc_count->add_option("--Q", cnt_Q)->required();
    sc_count->add_option("--delta", cnt_delta)->required();
    sc_count->add_option("--mode", cnt_mode)->check(CLI::IsMember({"full", "tilde"}));
    sc_count->add_flag("--per-q", cnt_perq);
    sc_count->add_flag("--exact", cnt_exact);
    sc_count->add_option("--workers", cnt_workers);
    sc_count->add_option("--out", cnt_out);

    // selberg
    auto* sc_sel = app.add_subcommand("selberg", "extremal trigonometric polynomial");
    int sel_K = 10;
    double sel_delta = 0.1;
    std::string sel_sign = "plus", sel_verify, sel_dump;
    sc_sel->add_option("--K", sel_K)->required();
    sc_sel->add_option("--delta", sel_delta)->required();
    sc_sel->add_option("--sign", sel_sign)->check(CLI::IsMember({"plus", "minus"}));
    sc_sel->add_option("--verify", sel_verify);
    sc_sel->add_option("--dump-coeffs", sel_dump);

    // oscdiag
    auto* sc_osc = app.add_subcommand("oscdiag", "exponential sum / oscillatory integral");
    std::string osc_curve = "parabola", osc_op = "expsum";
    long long osc_k = 1, osc_q = 100, osc_h = 0;
    // free the short -h so the index option --h can be registered
    sc_osc->set_help_flag("--help", "print help and exit");
    sc_osc->add_option("--curve", osc_curve);
    sc_osc->add_option("--k", osc_k)->required();
    sc_osc->add_option("--q", osc_q)->required();
    auto* osc_h_opt = sc_osc->add_option("--h", osc_h);
    sc_osc->add_option("--op", osc_op)
        ->check(CLI::IsMember({"expsum", "integral", "stationary", "census"}));

    // analyze
    auto* sc_an = app.add_subcommand("analyze", "asymptotic terms and bounds");
    std::string an_curve = "parabola", an_op = "mainterm", an_mode = "tilde";
    double an_Q = 100.0, an_delta = 0.1, an_theta = -1.0, an_eps = 0.05, an_c = 1.0;
    int an_K = 0, an_workers = 1;
    sc_an->add_option("--curve", an_curve);
    sc_an->add_option("--Q", an_Q)->required();
    sc_an->add_option("--delta", an_delta)->required();
    sc_an->add_option("--theta", an_theta);
    sc_an->add_option("--epsilon", an_eps);
    sc_an->add_option("--regime-c", an_c);
    sc_an->add_option("--mode", an_mode)->check(CLI::IsMember({"full", "tilde"}));
    sc_an->add_option("--K", an_K);
    sc_an->add_option("--workers", an_workers);
    sc_an->add_option("--op", an_op)
        ->check(CLI::IsMember({"mainterm", "error", "regime", "chooseK", "bound", "chain"}));

    // sweep
    auto* sc_sw = app.add_subcommand("sweep", "experiment grid over (Q, delta)");
    std::string sw_config, sw_curve, sw_mode, sw_out, sw_cache, sw_plot_ratio, sw_plot_err;
    double sw_qbase = -1, sw_qfactor = -1, sw_dc = -1, sw_dg = -1, sw_theta = -1, sw_eps = -1;
    int sw_qcount = -1, sw_workers = -1;
    std::string sw_dkind;
    bool sw_adm = false;
    sc_sw->add_option("--config", sw_config);
    sc_sw->add_option("--curve", sw_curve);
    sc_sw->add_option("--mode", sw_mode)->check(CLI::IsMember({"full", "tilde"}));
    sc_sw->add_option("--Q-base", sw_qbase);
    sc_sw->add_option("--Q-factor", sw_qfactor);
    sc_sw->add_option("--Q-count", sw_qcount);
    sc_sw->add_option("--delta-kind", sw_dkind)->check(CLI::IsMember({"fixed", "power"}));
    sc_sw->add_option("--delta-c", sw_dc);
    sc_sw->add_option("--delta-gamma", sw_dg);
    sc_sw->add_option("--theta", sw_theta);
    sc_sw->add_option("--epsilon", sw_eps);
    sc_sw->add_option("--workers", sw_workers);
    sc_sw->add_flag("--enforce-admissible", sw_adm);
    sc_sw->add_option("--out", sw_out);
    sc_sw->add_option("--cache-dir", sw_cache);
    sc_sw->add_option("--plot-ratio", sw_plot_ratio);
    sc_sw->add_option("--plot-error", sw_plot_err);

    // accept
    auto* sc_acc = app.add_subcommand("accept", "acceptance suites");
    std::string acc_suite = "all";
    int acc_workers = 1;
    sc_acc->add_option("suite", acc_suite);
    sc_acc->add_option("--workers", acc_workers);
    bool acc_list = false;
    sc_acc->add_flag("--list", acc_list);

    try {
        app.parse(argc, argv);

        if (sc_count->parsed())
            return cmd_count(cnt_curve, cnt_Q, cnt_delta, cnt_mode, cnt_perq, cnt_exact,
                             cnt_workers, cnt_out);
        if (sc_sel->parsed()) return cmd_selberg(sel_K, sel_delta, sel_sign, sel_verify, sel_dump);
        if (sc_osc->parsed())
            return cmd_oscdiag(osc_curve, osc_k, osc_q, osc_h, osc_h_opt->count() > 0, osc_op);
        if (sc_an->parsed())
            return cmd_analyze(an_curve, an_Q, an_delta, an_theta, an_eps, an_c, an_mode, an_K,
                               an_workers, an_op);
        if (sc_sw->parsed()) {
            SweepConfig cfg;
            if (!sw_config.empty()) cfg = parse_config(sw_config);
            if (!sw_curve.empty()) cfg.curve_spec = sw_curve;
            if (!sw_mode.empty()) cfg.mode = mode_from_name(sw_mode);
            if (sw_qbase > 0) cfg.Q_base = sw_qbase;
            if (sw_qfactor > 0) cfg.Q_factor = sw_qfactor;
            if (sw_qcount > 0) cfg.Q_count = sw_qcount;
            if (!sw_dkind.empty())
                cfg.delta_kind = sw_dkind == "power" ? DeltaKind::Power : DeltaKind::Fixed;
            if (sw_dc > 0) cfg.delta_c = sw_dc;
            if (sw_dg >= 0) cfg.delta_gamma = sw_dg;
            if (sw_theta > 0) cfg.theta = sw_theta;
            if (sw_eps > 0) cfg.epsilon = sw_eps;
            if (sw_workers > 0) cfg.workers = sw_workers;
            if (sw_adm) cfg.enforce_admissible = true;
            if (!sw_out.empty()) cfg.out_csv = sw_out;
            if (!sw_cache.empty()) cfg.cache_dir = sw_cache;
            auto recs = run_sweep(cfg);
            if (!sw_plot_ratio.empty()) emit_plot_data(recs, "ratio", sw_plot_ratio);
            if (!sw_plot_err.empty()) emit_plot_data(recs, "error-loglog", sw_plot_err);
            std::cout << "sweep: " << recs.size() << " records";
            if (!cfg.out_csv.empty()) std::cout << " -> " << cfg.out_csv;
            std::cout << '\n';
            return 0;
        }
        if (sc_acc->parsed()) {
            if (acc_list) {
                for (const auto& s : acceptance_suites()) std::cout << s << '\n';
                return 0;
            }
            AcceptanceReport rep = run_acceptance(acc_suite, acc_workers);
            for (const auto& l : rep.lines) std::cout << l << '\n';
            std::cout << (rep.pass ? "PASS " : "FAIL ") << rep.suite << '\n';
            return rep.pass ? 0 : 1;
        }
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
