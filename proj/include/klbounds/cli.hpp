#pragma once

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "klbounds/beta_bounds.hpp"
#include "klbounds/dirichlet_bounds.hpp"
#include "klbounds/io.hpp"
#include "klbounds/kinf.hpp"
#include "klbounds/montecarlo.hpp"
#include "klbounds/suites.hpp"
#include "klbounds/version.hpp"

// Command line front end. Subcommands:
//   bound     one-shot bound evaluation (Beta or Dirichlet instance)
//   kinf      the K_inf solver, optionally with the brute-force oracle
//   validate  bounds vs exact tails / Monte Carlo confidence intervals
//   sweep     machine-readable tables over a u- or alpha-grid
//   check     the empirical property suites
// Exit status: 0 = all pass or inconclusive, 1 = at least one fail,
// 2 = usage or domain error.

namespace klbounds::cli {

struct Instance {
    bool is_beta = false;
    double a = 0.0, b = 0.0;                // beta
    double alpha = 0.0;                     // dirichlet scale
    std::vector<double> base, payoffs;      // dirichlet base and payoffs
};

namespace detail {

inline std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != item.size() || item.empty())
            klbounds::detail::domain_fail(std::string(what) + ": cannot parse '" + item +
                                          "' as a number");
        out.push_back(v);
    }
    if (out.empty()) klbounds::detail::domain_fail(std::string(what) + ": empty list");
    return out;
}

// "lo:hi:steps" -> steps points, endpoints included
inline std::vector<double> parse_grid(const std::string& text, const char* what) {
    std::stringstream ss(text);
    std::string lo_s, hi_s, n_s;
    if (!std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s, ':') ||
        !std::getline(ss, n_s, ':'))
        klbounds::detail::domain_fail(std::string(what) + ": expected lo:hi:steps");
    const double lo = std::stod(lo_s), hi = std::stod(hi_s);
    const int n = std::stoi(n_s);
    if (n < 1 || hi < lo)
        klbounds::detail::domain_fail(std::string(what) + ": needs hi >= lo and steps >= 1");
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i)
        out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return out;
}

inline PerturbationRule parse_rule(const std::string& text) {
    if (text == "s0") return PerturbationRule::S0();
    if (text == "s1") return PerturbationRule::S1();
    if (text == "s2") return PerturbationRule::S2();
    if (text == "sinf") return PerturbationRule::SInf();
    if (text.rfind("eta=", 0) == 0) return PerturbationRule::Explicit(std::stod(text.substr(4)));
    klbounds::detail::domain_fail("--rule: expected s0|s1|s2|sinf|eta=VALUE, got '" + text +
                                  "'");
}

inline const std::vector<std::string>& beta_kinds() {
    static const std::vector<std::string> k = {"hoeffding", "bernstein", "kl",
                                               "perturbed-table1", "perturbed-general"};
    return k;
}

inline const std::vector<std::string>& dirichlet_kinds() {
    static const std::vector<std::string> k = {"chernoff", "unit-mass", "beyond-unit"};
    return k;
}

inline std::vector<std::string> parse_kinds(const std::string& text, bool is_beta) {
    const auto& all = is_beta ? beta_kinds() : dirichlet_kinds();
    if (text == "all") return all;
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        bool known = false;
        for (const auto& k : all) known = known || k == item;
        if (!known)
            klbounds::detail::domain_fail("--kinds: unknown kind '" + item + "' for this model");
        out.push_back(item);
    }
    if (out.empty()) klbounds::detail::domain_fail("--kinds: empty list");
    return out;
}

inline BoundReport evaluate_bound(const std::string& kind, const Instance& in, double u,
                                  PerturbationRule rule) {
    if (in.is_beta) {
        BetaParams p(in.a, in.b);
        if (kind == "hoeffding") return hoeffding_bound(p, u);
        if (kind == "bernstein") return bernstein_bound(p, u);
        if (kind == "kl") return kl_bound(p, u);
        if (kind == "perturbed-table1") return perturbed_kl_bound_table1(p, u);
        return perturbed_kl_bound_general(p, u, rule);
    }
    DirichletParams d(in.alpha, FiniteSupport(in.base, in.payoffs));
    if (kind == "chernoff") return chernoff_kinf_bound(d, u);
    if (kind == "unit-mass") return unit_mass_perturbed_bound(d, u);
    return beyond_unit_bound(d, u, rule);
}

inline std::string detail_csv(const std::vector<std::pair<std::string, double>>& kv) {
    std::string out;
    for (std::size_t i = 0; i < kv.size(); ++i) {
        if (i) out += ";";
        out += kv[i].first + "=" + io::fmt_double(kv[i].second);
    }
    return out;
}

inline std::string list_csv(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ";";
        out += io::fmt_double(v[i]);
    }
    return out;
}

inline void echo_instance(io::JsonObject& obj, const Instance& in) {
    obj.field("model", in.is_beta ? "beta" : "dirichlet");
    if (in.is_beta) {
        obj.field("a", in.a).field("b", in.b);
    } else {
        obj.field("alpha", in.alpha)
            .field_vector("base", in.base)
            .field_vector("payoffs", in.payoffs);
    }
}

}  // namespace detail

struct CommonOptions {
    std::string format = "json";
    std::string rule_text = "s0";
    long long n = 1000000;
    std::uint64_t seed = 0;
    double confidence = 0.999;
    int workers = 1;
};

// ---------------------------------------------------------------------------

inline int cmd_bound(const Instance& in, double u, const std::string& kinds_text,
                     const CommonOptions& opt, std::ostream& out) {
    const auto rule = detail::parse_rule(opt.rule_text);
    const auto kinds = detail::parse_kinds(kinds_text, in.is_beta);
    const bool csv = opt.format == "csv";
    if (csv)
        out << "version,command,model,a,b,alpha,base,payoffs,u,rule,kind,log_bound,valid,"
               "eta_used,detail\n";

    auto emit = [&](const std::string& kind, const BoundReport* rep, double exact_log) {
        if (csv) {
            std::vector<std::string> cells = {
                version_string,
                "bound",
                in.is_beta ? "beta" : "dirichlet",
                in.is_beta ? io::fmt_double(in.a) : "",
                in.is_beta ? io::fmt_double(in.b) : "",
                in.is_beta ? "" : io::fmt_double(in.alpha),
                in.is_beta ? "" : detail::list_csv(in.base),
                in.is_beta ? "" : detail::list_csv(in.payoffs),
                io::fmt_double(u),
                to_string(rule.kind),
                kind,
                io::fmt_double(rep ? rep->log_bound : exact_log),
                rep ? (rep->valid ? "true" : "false") : "true",
                rep && rep->eta_used ? io::fmt_double(*rep->eta_used) : "",
                rep ? detail::detail_csv(rep->detail) : ""};
            out << io::join_csv(cells) << "\n";
        } else {
            io::JsonObject obj;
            obj.field("version", version_string).field("command", "bound");
            detail::echo_instance(obj, in);
            obj.field("u", u).field("rule", to_string(rule.kind)).field("kind", kind);
            if (rep) {
                obj.field("log_bound", rep->log_bound).field("valid", rep->valid);
                if (rep->eta_used) obj.field("eta_used", *rep->eta_used);
                obj.field_object("detail", rep->detail);
            } else {
                obj.field("log_bound", exact_log).field("valid", true);
            }
            out << obj.str() << "\n";
        }
    };

    for (const auto& kind : kinds) {
        const auto rep = detail::evaluate_bound(kind, in, u, rule);
        emit(kind, &rep, 0.0);
    }
    if (in.is_beta) emit("exact", nullptr, std::log(beta_tail(in.a, in.b, u)));
    return 0;
}

// ---------------------------------------------------------------------------

inline int cmd_kinf(const std::vector<double>& weights, const std::vector<double>& payoffs,
                    double u, bool with_oracle, int grid_steps, const CommonOptions& opt,
                    std::ostream& out) {
    FiniteSupport nu(weights, payoffs);
    const auto sol = kinf_variational(nu, u);
    const bool csv = opt.format == "csv";
    if (csv) {
        out << "version,command,record,value,lambda_star,dual_slack,at_boundary,u,weights,"
               "payoffs,grid_steps\n";
        out << io::join_csv({version_string, "kinf", "solution", io::fmt_double(sol.value),
                             io::fmt_double(sol.lambda_star), io::fmt_double(sol.dual_slack),
                             sol.at_boundary ? "true" : "false", io::fmt_double(u),
                             detail::list_csv(weights), detail::list_csv(payoffs), ""})
            << "\n";
    } else {
        io::JsonObject obj;
        obj.field("version", version_string)
            .field("command", "kinf")
            .field("record", "solution")
            .field_vector("weights", weights)
            .field_vector("payoffs", payoffs)
            .field("u", u)
            .field("value", sol.value)
            .field("lambda_star", sol.lambda_star)
            .field("dual_slack", sol.dual_slack)
            .field("at_boundary", sol.at_boundary)
            .field("u_at_fmax", sol.u_at_fmax);
        out << obj.str() << "\n";
    }
    if (with_oracle) {
        const double oracle = kinf_bruteforce(nu, u, grid_steps);
        if (csv) {
            out << io::join_csv({version_string, "kinf", "oracle", io::fmt_double(oracle), "",
                                 "", "", io::fmt_double(u), detail::list_csv(weights),
                                 detail::list_csv(payoffs), std::to_string(grid_steps)})
                << "\n";
        } else {
            io::JsonObject obj;
            obj.field("version", version_string)
                .field("command", "kinf")
                .field("record", "oracle")
                .field_vector("weights", weights)
                .field_vector("payoffs", payoffs)
                .field("u", u)
                .field("value", oracle)
                .field("grid_steps", grid_steps);
            out << obj.str() << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------

inline int cmd_validate(const Instance& in, double u, const std::string& kinds_text,
                        const CommonOptions& opt, std::ostream& out) {
    const auto rule = detail::parse_rule(opt.rule_text);
    const auto kinds = detail::parse_kinds(kinds_text, in.is_beta);

    // reference: exact where the mathematics provides it, Monte Carlo else
    bool exact_available = in.is_beta;
    double exact_log = 0.0;
    TailEstimate est;
    if (in.is_beta) {
        exact_log = std::log(beta_tail(in.a, in.b, u));
    } else if (in.base.size() == 2) {
        std::vector<double> masses = {in.alpha * in.base[0], in.alpha * in.base[1]};
        exact_log = exact_log_tail_d2(masses, in.payoffs, u);
        exact_available = true;
    }
    if (!exact_available) {
        DirichletParams d(in.alpha, FiniteSupport(in.base, in.payoffs));
        est = estimate_tail(d, u, opt.n, opt.seed, opt.confidence, opt.workers);
    }

    int fails = 0;
    for (const auto& kind : kinds) {
        const auto rep = detail::evaluate_bound(kind, in, u, rule);
        Verdict verdict;
        if (!rep.valid) {
            verdict = Verdict::inconclusive;  // the bound makes no claim here
        } else if (exact_available) {
            verdict = rep.log_bound >= exact_log - 1e-9 ? Verdict::pass : Verdict::fail;
        } else if (est.n_hits == 0) {
            verdict = Verdict::inconclusive;  // deep tail, not reachable at this n
        } else {
            verdict = std::exp(rep.log_bound) >= est.ci_low ? Verdict::pass : Verdict::fail;
        }
        fails += verdict == Verdict::fail;

        io::JsonObject obj;
        obj.field("version", version_string).field("command", "validate");
        detail::echo_instance(obj, in);
        obj.field("u", u)
            .field("rule", to_string(rule.kind))
            .field("kind", kind)
            .field("log_bound", rep.log_bound)
            .field("valid", rep.valid)
            .field("reference", exact_available ? "exact" : "mc");
        if (exact_available) {
            obj.field("exact_log_tail", exact_log);
        } else {
            obj.field("mc_p_hat", est.p_hat)
                .field("mc_ci_low", est.ci_low)
                .field("mc_ci_high", est.ci_high)
                .field("n", est.n_samples)
                .field("seed", (unsigned long long)est.seed);
        }
        obj.field("verdict", to_string(verdict));
        out << obj.str() << "\n";
    }
    return fails > 0 ? 1 : 0;
}

// ---------------------------------------------------------------------------

inline int cmd_sweep(const Instance& in, const std::vector<double>& u_grid,
                     const std::vector<double>& alpha_grid, double fixed_u,
                     const std::string& kinds_text, const CommonOptions& opt,
                     std::ostream& out) {
    const auto rule = detail::parse_rule(opt.rule_text);
    const auto kinds = detail::parse_kinds(kinds_text, in.is_beta);
    const bool csv = opt.format == "csv";
    const bool alpha_sweep = !alpha_grid.empty();
    const bool mc_ref = !in.is_beta && in.base.size() != 2;

    if (csv) {
        std::vector<std::string> header = {alpha_sweep ? "alpha" : "u"};
        if (mc_ref) {
            header.insert(header.end(), {"mc_p_hat", "mc_ci_low", "mc_ci_high"});
        } else {
            header.push_back("exact_log_tail");
        }
        for (const auto& kind : kinds) {
            header.push_back(kind);
            header.push_back(kind + "_valid");
        }
        out << io::join_csv(header) << "\n";
    }

    const auto& axis = alpha_sweep ? alpha_grid : u_grid;
    for (double x : axis) {
        Instance point = in;
        double u = fixed_u;
        if (alpha_sweep)
            point.alpha = x;
        else
            u = x;

        double exact_log = 0.0;
        TailEstimate est;
        if (point.is_beta) {
            exact_log = std::log(beta_tail(point.a, point.b, u));
        } else if (point.base.size() == 2) {
            std::vector<double> masses = {point.alpha * point.base[0],
                                          point.alpha * point.base[1]};
            exact_log = exact_log_tail_d2(masses, point.payoffs, u);
        } else {
            DirichletParams d(point.alpha, FiniteSupport(point.base, point.payoffs));
            est = estimate_tail(d, u, opt.n, opt.seed, opt.confidence, opt.workers);
        }

        std::vector<std::string> cells = {io::fmt_double(x)};
        io::JsonObject obj;
        if (!csv) {
            obj.field("version", version_string).field("command", "sweep");
            detail::echo_instance(obj, point);
            obj.field("u", u).field("rule", to_string(rule.kind));
        }
        if (mc_ref) {
            if (csv) {
                cells.push_back(io::fmt_double(est.p_hat));
                cells.push_back(io::fmt_double(est.ci_low));
                cells.push_back(io::fmt_double(est.ci_high));
            } else {
                obj.field("mc_p_hat", est.p_hat)
                    .field("mc_ci_low", est.ci_low)
                    .field("mc_ci_high", est.ci_high);
            }
        } else if (csv) {
            cells.push_back(io::fmt_double(exact_log));
        } else {
            obj.field("exact_log_tail", exact_log);
        }
        for (const auto& kind : kinds) {
            const auto rep = detail::evaluate_bound(kind, point, u, rule);
            if (csv) {
                cells.push_back(io::fmt_double(rep.log_bound));
                cells.push_back(rep.valid ? "true" : "false");
            } else {
                obj.field(kind, rep.log_bound).field(kind + "_valid", rep.valid);
            }
        }
        out << (csv ? io::join_csv(cells) : obj.str()) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------

inline int cmd_check(const std::string& suite, const CommonOptions& opt, std::ostream& out) {
    int fails = 0;
    const bool all = suite == "all";

    auto emit_verdict = [&](const char* suite_name, const char* instance,
                            const VerdictRecord& rec) {
        fails += rec.verdict == Verdict::fail;
        io::JsonObject obj;
        obj.field("version", version_string)
            .field("command", "check")
            .field("suite", suite_name)
            .field("instance", instance)
            .field("n", opt.n)
            .field("seed", (unsigned long long)opt.seed)
            .field("verdict", to_string(rec.verdict));
        for (std::size_t i = 0; i < rec.estimates.size(); ++i) {
            const auto& e = rec.estimates[i];
            const std::string tag = "estimate" + std::to_string(i + 1);
            obj.field(tag + "_p_hat", e.p_hat)
                .field(tag + "_hits", e.n_hits)
                .field(tag + "_ci_low", e.ci_low)
                .field(tag + "_ci_high", e.ci_high);
        }
        for (const auto& [k, v] : rec.detail) obj.field(k, v);
        out << obj.str() << "\n";
    };

    bool known = all;
    if (all || suite == "s-family") {
        known = true;
        for (const auto& check : suites::run_s_family_suite()) {
            const bool ok = check.violations == 0;
            fails += !ok;
            io::JsonObject obj;
            obj.field("version", version_string)
                .field("command", "check")
                .field("suite", "s-family")
                .field("check", check.check)
                .field("points", check.points)
                .field("violations", check.violations)
                .field("worst", check.worst)
                .field("verdict", ok ? "pass" : "fail");
            out << obj.str() << "\n";
        }
    }
    if (all || suite == "superadditivity") {
        known = true;
        for (const auto& inst : suites::superadditivity_instances()) {
            FiniteSupport nu(inst.weights, inst.payoffs);
            Perturbation eta{inst.eta, 0.0};
            for (double m : inst.eta) eta.total += m;
            const auto rec =
                check_superadditivity_halfspace(nu, eta, inst.u, inst.s, inst.t, opt.n,
                                                opt.seed, opt.confidence, opt.workers);
            emit_verdict("superadditivity", inst.name, rec);
        }
    }
    if (all || suite == "convex") {
        known = true;
        for (const auto& inst : suites::convex_instances()) {
            const auto rec = check_superadditivity_convex(inst.nu, inst.p_ref, inst.x_atom,
                                                          inst.s, inst.t, opt.n, opt.seed,
                                                          opt.confidence, opt.workers);
            emit_verdict("convex", inst.name, rec);
        }
    }
    if (all || suite == "correspondence") {
        known = true;
        for (const auto& inst : suites::correspondence_instances()) {
            const auto rec =
                check_dirichlet_multinomial(inst.n_trials, inst.p, inst.thresholds, opt.n,
                                            opt.seed, opt.confidence, opt.workers);
            emit_verdict("correspondence", inst.name, rec);
        }
    }
    if (!known)
        klbounds::detail::domain_fail(
            "--suite: expected superadditivity|convex|correspondence|s-family|all, got '" +
            suite + "'");
    return fails > 0 ? 1 : 0;
}

// ---------------------------------------------------------------------------

inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
    CLI::App app{"Certified exponential tail bounds for Beta and Dirichlet distributions"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string beta_text, base_text, payoffs_text, weights_text, output_path;
    double alpha = 0.0, u = std::numeric_limits<double>::quiet_NaN();
    std::string u_grid_text, alpha_grid_text, kinds_text = "all", suite = "all";
    bool with_oracle = false;
    int grid_steps = 2000;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", opt.format, "Output format: json (line-delimited) or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--output", output_path,
                        "Write records to this file instead of standard output");
        cmd->add_option("--rule", opt.rule_text,
                        "Perturbation rule: s0|s1|s2|sinf|eta=VALUE (default s0)");
        cmd->add_option("--n", opt.n, "Monte Carlo sample count (default 1e6)");
        cmd->add_option("--seed", opt.seed, "RNG seed (default 0)");
        cmd->add_option("--confidence", opt.confidence,
                        "Confidence level for intervals (default 0.999)");
        cmd->add_option("--workers", opt.workers,
                        "Worker threads for Monte Carlo (results do not depend on this)");
    };
    auto add_instance = [&](CLI::App* cmd) {
        cmd->add_option("--beta", beta_text, "Beta instance as a,b");
        cmd->add_option("--dirichlet", alpha, "Dirichlet scale parameter alpha");
        cmd->add_option("--base", base_text, "Dirichlet base weights w1,...,wd");
        cmd->add_option("--payoffs", payoffs_text, "Payoff values f1,...,fd");
    };

    auto* bound = app.add_subcommand("bound", "Evaluate tail bounds on one instance");
    add_instance(bound);
    bound->add_option("--u", u, "Threshold u")->required();
    bound->add_option("--kinds", kinds_text, "Comma list of bound kinds, or 'all'");
    add_common(bound);

    auto* kinf_cmd = app.add_subcommand("kinf", "Solve the K_inf information projection");
    kinf_cmd->add_option("--weights", weights_text, "Probability weights w1,...,wd")
        ->required();
    kinf_cmd->add_option("--payoffs", payoffs_text, "Payoff values f1,...,fd")->required();
    kinf_cmd->add_option("--u", u, "Threshold u")->required();
    kinf_cmd->add_flag("--oracle", with_oracle, "Also run the brute-force oracle (d <= 4)");
    kinf_cmd->add_option("--grid-steps", grid_steps, "Oracle lattice resolution");
    add_common(kinf_cmd);

    auto* validate = app.add_subcommand("validate", "Compare bounds against ground truth");
    add_instance(validate);
    validate->add_option("--u", u, "Threshold u")->required();
    validate->add_option("--kinds", kinds_text, "Comma list of bound kinds, or 'all'");
    add_common(validate);

    auto* sweep = app.add_subcommand("sweep", "Tabulate bounds over a grid");
    add_instance(sweep);
    sweep->add_option("--u", u, "Fixed threshold (for --alpha-grid sweeps)");
    sweep->add_option("--u-grid", u_grid_text, "u grid as lo:hi:steps");
    sweep->add_option("--alpha-grid", alpha_grid_text,
                      "alpha grid as lo:hi:steps (Dirichlet only; fixes --u)");
    sweep->add_option("--kinds", kinds_text, "Comma list of bound kinds, or 'all'");
    add_common(sweep);

    auto* check = app.add_subcommand("check", "Run an empirical property suite");
    check->add_option("--suite", suite,
                      "superadditivity|convex|correspondence|s-family|all");
    add_common(check);

    // CSV sweep column order: the first column is the swept variable (u or
    // alpha), then the reference (exact_log_tail, or mc_p_hat/mc_ci_low/
    // mc_ci_high when only Monte Carlo is available), then for each kind in
    // the requested order its log-bound and validity flag.
    sweep->footer(
        "CSV columns: u|alpha, exact_log_tail | mc_p_hat,mc_ci_low,mc_ci_high, then "
        "<kind>,<kind>_valid per requested kind.");

    std::vector<const char*> argv;
    argv.push_back("klbounds");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        std::ofstream file_out;
        std::ostream* sink = &out;
        if (!output_path.empty()) {
            file_out.open(output_path);
            if (!file_out)
                klbounds::detail::domain_fail("--output: cannot open '" + output_path + "'");
            sink = &file_out;
        }
        std::ostream& dst = *sink;

        Instance in;
        auto build_instance = [&]() {
            if (!beta_text.empty()) {
                const auto ab = detail::parse_list(beta_text, "--beta");
                if (ab.size() != 2)
                    klbounds::detail::domain_fail("--beta: expected exactly a,b");
                in.is_beta = true;
                in.a = ab[0];
                in.b = ab[1];
            } else {
                if (alpha <= 0.0 || base_text.empty() || payoffs_text.empty())
                    klbounds::detail::domain_fail(
                        "instance: need --beta a,b or --dirichlet ALPHA --base ... --payoffs ...");
                in.alpha = alpha;
                in.base = detail::parse_list(base_text, "--base");
                in.payoffs = detail::parse_list(payoffs_text, "--payoffs");
                if (in.base.size() != in.payoffs.size())
                    klbounds::detail::domain_fail("instance: --base and --payoffs lengths differ");
            }
        };

        if (bound->parsed()) {
            build_instance();
            return cmd_bound(in, u, kinds_text, opt, dst);
        }
        if (kinf_cmd->parsed()) {
            return cmd_kinf(detail::parse_list(weights_text, "--weights"),
                            detail::parse_list(payoffs_text, "--payoffs"), u, with_oracle,
                            grid_steps, opt, dst);
        }
        if (validate->parsed()) {
            build_instance();
            return cmd_validate(in, u, kinds_text, opt, dst);
        }
        if (sweep->parsed()) {
            build_instance();
            std::vector<double> u_grid, alpha_grid;
            if (!alpha_grid_text.empty()) {
                if (in.is_beta)
                    klbounds::detail::domain_fail("--alpha-grid: applies to Dirichlet instances");
                if (std::isnan(u))
                    klbounds::detail::domain_fail("--alpha-grid: requires a fixed --u");
                alpha_grid = detail::parse_grid(alpha_grid_text, "--alpha-grid");
            } else if (!u_grid_text.empty()) {
                u_grid = detail::parse_grid(u_grid_text, "--u-grid");
            } else {
                klbounds::detail::domain_fail("sweep: need --u-grid or --alpha-grid");
            }
            return cmd_sweep(in, u_grid, alpha_grid, u, kinds_text, opt, dst);
        }
        if (check->parsed()) {
            return cmd_check(suite, opt, dst);
        }
    } catch (const std::domain_error& e) {
        err << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace klbounds::cli
