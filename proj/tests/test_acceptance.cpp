#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "klbounds/cli.hpp"
#include "klbounds/dirichlet_bounds.hpp"
#include "klbounds/montecarlo.hpp"
#include "klbounds/suites.hpp"
#include "oracles.hpp"

// Acceptance suite: one test case per criterion, each printing a single
// PASS/FAIL line with its measured margin and runtime.

using namespace klbounds;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

void report(int idx, bool pass, const std::string& what) {
    std::printf("[acceptance %2d] %s  %s\n", idx, pass ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
}

const double kAbGrid[] = {0.5, 1.0, 2.0, 5.0, 10.0};

std::vector<PerturbationRule> all_rules() {
    return {PerturbationRule::S0(), PerturbationRule::S1(), PerturbationRule::S2(),
            PerturbationRule::SInf()};
}

}  // namespace

TEST_CASE("acceptance 1: beta soundness sweep") {
    Timer timer;
    long long checked = 0, violations = 0;
    double worst = 0.0;
    for (double a : kAbGrid)
        for (double b : kAbGrid) {
            const BetaParams p(a, b);
            for (int i = 1; i <= 99; ++i) {
                const double u = i / 100.0;
                const double exact = std::log(beta_tail(a, b, u));
                auto probe = [&](const BoundReport& rep) {
                    if (!rep.valid) return;
                    ++checked;
                    if (!(rep.log_bound >= exact - 1e-9)) {
                        ++violations;
                        worst = std::max(worst, exact - rep.log_bound);
                    }
                };
                probe(hoeffding_bound(p, u));
                probe(bernstein_bound(p, u));
                probe(kl_bound(p, u));
                probe(perturbed_kl_bound_table1(p, u));
                for (const auto& rule : all_rules())
                    probe(perturbed_kl_bound_general(p, u, rule));
            }
        }
    const double secs = timer.seconds();
    std::ostringstream msg;
    msg << "beta soundness: " << checked << " valid bounds, " << violations
        << " violations, " << secs << " s (target < 10 s)";
    const bool pass = violations == 0 && secs < 10.0;
    report(1, pass, msg.str());
    REQUIRE(pass);
}

TEST_CASE("acceptance 2: table-1 equivalence of the S0 rule") {
    long long bad = 0;
    double worst = 0.0;
    for (double a : kAbGrid) {
        if (a < 1.0) continue;
        for (double b : kAbGrid)
            for (int i = 1; i <= 99; ++i) {
                const double u = i / 100.0;
                const double general =
                    perturbed_kl_bound_general(BetaParams(a, b), u, PerturbationRule::S0())
                        .log_bound;
                const double table =
                    perturbed_kl_bound_table1(BetaParams(a, b), u).log_bound;
                if (std::isinf(general) && std::isinf(table)) continue;
                const double diff = std::fabs(general - table);
                if (!(diff <= 1e-12 * std::max(1.0, std::fabs(table)))) {
                    ++bad;
                    worst = std::max(worst, diff);
                }
            }
    }
    std::ostringstream msg;
    msg << "S0 rule vs table-1 closed form: worst diff " << worst;
    report(2, bad == 0, msg.str());
    REQUIRE(bad == 0);
}

TEST_CASE("acceptance 3: S-family property suite") {
    Timer timer;
    long long order_bad = 0, root_bad = 0, sign_bad = 0, thresh_bad = 0, mono_bad = 0;
    double root_worst = 0.0;
    for (double a : kAbGrid)
        for (double b : kAbGrid) {
            const BetaParams p(a, b);
            double prev_sinf = pos_inf;
            for (int i = 1; i <= 99; ++i) {
                const double u = i / 100.0;
                const double vi = s_inf(p, u);
                if ((vi <= a + 1e-10) != (a >= 1.0)) ++thresh_bad;
                if (a < 1.0) continue;
                const double v0 = s0(p, u), v1 = s1(p, u), v2 = s2(p, u);
                if (!(vi >= v2 - 1e-10 && v2 >= v1 - 1e-10 && v1 >= v0 - 1e-10 &&
                      v0 >= -1e-10))
                    ++order_bad;
                const double resid = std::fabs(R_function(p, u, vi));
                if (!(resid <= 1e-9)) {
                    ++root_bad;
                    root_worst = std::max(root_worst, resid);
                }
                for (int j = 1; j <= 20; ++j)
                    if (R_function(p, u, vi * j / 21.0) > 1e-12) ++sign_bad;
                if (vi > prev_sinf + 1e-12) ++mono_bad;
                prev_sinf = vi;
            }
        }
    const double secs = timer.seconds();
    std::ostringstream msg;
    msg << "ordering " << (order_bad == 0 ? "ok" : "BAD") << "; |R(S_inf)|<=1e-9 has "
        << root_bad << "/2475 violations (worst " << root_worst
        << "); R<=0 " << (sign_bad == 0 ? "ok" : "BAD") << "; threshold "
        << (thresh_bad == 0 ? "ok" : "BAD") << "; monotone "
        << (mono_bad == 0 ? "ok" : "BAD") << "; " << secs << " s (target < 5 s)";
    const bool pass =
        order_bad == 0 && root_bad == 0 && sign_bad == 0 && thresh_bad == 0 &&
        mono_bad == 0 && secs < 5.0;
    report(3, pass, msg.str());
    if (root_bad > 0)
        std::printf(
        "              note: the root-residual tolerance is unreachable in IEEE double\n"
        "              at large-a/small-u corners: near the root dR/deta ~ (1-u)/(b u^eta*),\n"
        "              up to ~2e20 on this grid, so rounding eta* to the nearest double\n"
        "              already forces |R| >> 1e-9 there. All other sub-checks pass; the\n"
        "              s-family check suite verifies the root to achievable precision.\n");
    CHECK(order_bad == 0);
    CHECK(sign_bad == 0);
    CHECK(thresh_bad == 0);
    CHECK(mono_bad == 0);
    CHECK(secs < 5.0);
    REQUIRE(root_bad == 0);  // expected to fail; see the note above
}

TEST_CASE("acceptance 4: K_inf variational vs brute force on 200 instances") {
    Timer timer;
    oracles::InstanceRng gen(20240801);
    long long bad = 0;
    double worst_gap = 0.0, worst_slack = 0.0;
    for (int t = 0; t < 200; ++t) {
        const int d = 2 + t % 3;
        const auto inst = oracles::make_kinf_instance(gen, d);
        const FiniteSupport nu(inst.weights, inst.payoffs);
        const auto sol = kinf_variational(nu, inst.u);
        const double brute = kinf_bruteforce(nu, inst.u, oracles::bruteforce_steps(d));
        const double gap = std::fabs(sol.value - brute);
        worst_gap = std::max(worst_gap, gap);
        if (gap > 1e-4) ++bad;
        if (sol.dual_slack > 1.0 + 1e-9) ++bad;
        if (!sol.at_boundary && sol.value > 0.0) {
            worst_slack = std::max(worst_slack, std::fabs(sol.dual_slack - 1.0));
            if (std::fabs(sol.dual_slack - 1.0) > 1e-6) ++bad;
        }
    }
    const double secs = timer.seconds();
    std::ostringstream msg;
    msg << "200 instances: worst |var-brute| " << worst_gap << ", worst interior |slack-1| "
        << worst_slack << ", " << secs << " s (target < 60 s)";
    const bool pass = bad == 0 && secs < 60.0;
    report(4, pass, msg.str());
    REQUIRE(pass);
}

TEST_CASE("acceptance 5: indicator-payoff reduction to kl_binary") {
    oracles::InstanceRng gen(515151);
    long long bad = 0;
    double worst = 0.0;
    int done = 0;
    while (done < 50) {
        const int d = gen.uniform_int(2, 5);
        auto w = gen.simplex(d, 0.05);
        std::vector<double> f(d);
        double mass = 0.0;
        bool any0 = false, any1 = false;
        for (int i = 0; i < d; ++i) {
            f[i] = gen.uniform(0.0, 1.0) < 0.5 ? 0.0 : 1.0;
            (f[i] == 1.0 ? any1 : any0) = true;
            mass += w[i] * f[i];
        }
        if (!any0 || !any1 || mass > 0.97) continue;
        const double u = gen.uniform(mass + 0.01, 0.995);
        const double got = kinf_variational(FiniteSupport(w, f), u).value;
        const double want = kl_binary(mass, u);
        worst = std::max(worst, std::fabs(got - want));
        if (std::fabs(got - want) > 1e-10) ++bad;
        ++done;
    }
    std::ostringstream msg;
    msg << "50 {0,1}-payoff instances: worst |K_inf - kl| " << worst;
    report(5, bad == 0, msg.str());
    REQUIRE(bad == 0);
}

TEST_CASE("acceptance 6: unit-mass maximizer certification") {
    Timer timer;
    // worked instance first
    const DirichletParams worked(3.0, FiniteSupport({0.2, 0.8}, {1.0, 0.0}));
    const double closed_worked = -unit_mass_perturbed_bound(worked, 0.6).log_bound;
    const double oracle_worked = eta_star_oracle(worked, 0.6, 400);
    const double chernoff_worked = -chernoff_kinf_bound(worked, 0.6).log_bound;
    bool pass = std::fabs(closed_worked - 2.19910) <= 1e-4 &&
                closed_worked >= oracle_worked - 2e-3 && closed_worked > 1.00432 &&
                closed_worked > chernoff_worked;

    oracles::InstanceRng gen(606060);
    long long bad = 0;
    double worst = -pos_inf;
    for (int t = 0; t < 50; ++t) {
        const int d = (t % 4 == 3) ? 3 : 2;
        const auto inst = oracles::make_kinf_instance(gen, d);
        const double alpha = gen.uniform(1.2, 4.0);
        const DirichletParams dp(alpha, FiniteSupport(inst.weights, inst.payoffs));
        const double closed = -unit_mass_perturbed_bound(dp, inst.u).log_bound;
        const double oracle = eta_star_oracle(dp, inst.u, 400);
        worst = std::max(worst, oracle - closed);
        if (!(closed >= oracle - 2e-3)) ++bad;
    }
    pass = pass && bad == 0;
    const double secs = timer.seconds();
    std::ostringstream msg;
    msg << "worked exponent " << closed_worked << " (2.19910 +- 1e-4, oracle "
        << oracle_worked << ", chernoff " << chernoff_worked
        << "); 50 random instances worst oracle-closed " << worst << "; " << secs << " s";
    report(6, pass, msg.str());
    REQUIRE(pass);
}

TEST_CASE("acceptance 7: unit-mass dominates chernoff") {
    oracles::InstanceRng gen(707070);
    long long bad = 0;
    for (int t = 0; t < 120; ++t) {
        const int d = 2 + t % 3;
        const auto inst = oracles::make_kinf_instance(gen, d);
        const DirichletParams dp(gen.uniform(1.1, 6.0),
                                 FiniteSupport(inst.weights, inst.payoffs));
        const double fmin = dp.base.f_min(), fmax = dp.base.f_max();
        const double u = gen.uniform(fmin + 0.02 * (fmax - fmin), fmax - 0.03 * (fmax - fmin));
        const auto unit = unit_mass_perturbed_bound(dp, u);
        const auto cher = chernoff_kinf_bound(dp, u);
        if (!(unit.log_bound <= cher.log_bound + 1e-12)) ++bad;
        if (std::fabs(unit.log_bound - cher.log_bound) <= 1e-12 && cher.log_bound != 0.0 &&
            *unit.eta_used != 0.0)
            ++bad;  // equality allowed only when no perturbation can help
    }
    report(7, bad == 0, "unit-mass exponent >= chernoff exponent on 120 instances");
    REQUIRE(bad == 0);
}

TEST_CASE("acceptance 8: dirichlet d=2 exact soundness grid") {
    long long checked = 0, bad = 0;
    for (double alpha : {0.5, 1.5, 3.0, 5.0, 8.0})
        for (int wi = 1; wi <= 9; ++wi)
            for (int ui = 1; ui <= 13; ++ui) {
                const double w = wi / 10.0;
                const double u = ui / 14.0;
                const DirichletParams dp(alpha, FiniteSupport({w, 1.0 - w}, {1.0, 0.0}));
                const double exact = std::log(beta_tail(alpha * w, alpha * (1.0 - w), u));
                auto probe = [&](double lb) {
                    ++checked;
                    if (!(lb >= exact - 1e-9)) ++bad;
                };
                probe(chernoff_kinf_bound(dp, u).log_bound);
                try {
                    probe(unit_mass_perturbed_bound(dp, u).log_bound);
                } catch (const std::domain_error&) {
                    // alpha <= 1 with all mass above u: degenerate scale
                }
                probe(beyond_unit_bound(dp, u, PerturbationRule::S0()).log_bound);
                probe(beyond_unit_bound(dp, u, PerturbationRule::SInf()).log_bound);
            }
    std::ostringstream msg;
    msg << "d=2 exact reduction: " << checked << " bound evaluations, " << bad
        << " violations";
    report(8, bad == 0 && checked >= 500, msg.str());
    REQUIRE(bad == 0);
    REQUIRE(checked >= 500);
}

TEST_CASE("acceptance 9: dirichlet d=3 soundness against Monte Carlo") {
    Timer timer;
    struct Inst {
        double alpha;
        std::vector<double> w, f;
        double u;
    };
    const std::vector<Inst> instances = {
        {2.0, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0, 0.5, 1}, 0.6},
        {4.0, {0.2, 0.5, 0.3}, {0, 0.5, 1}, 0.7},
        {1.5, {0.3, 0.4, 0.3}, {-1, 0, 1}, 0.3},
        {6.0, {0.5, 0.3, 0.2}, {0, 0.25, 1}, 0.5},
        {3.0, {0.2, 0.3, 0.5}, {0, 0.5, 1}, 0.8},
        {2.5, {0.6, 0.3, 0.1}, {0, 0.5, 1}, 0.45},
        {5.0, {0.25, 0.5, 0.25}, {0, 0.4, 0.8}, 0.55},
        {1.0, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0, 0.5, 1}, 0.75},
        {8.0, {0.4, 0.4, 0.2}, {0.1, 0.5, 0.9}, 0.6},
        {3.5, {0.15, 0.35, 0.5}, {1, 0.5, 0}, 0.55},
    };
    long long bad = 0, zero_hit = 0;
    for (const auto& inst : instances) {
        const DirichletParams dp(inst.alpha, FiniteSupport(inst.w, inst.f));
        const auto est = estimate_tail(dp, inst.u, 1000000, 0, 0.999, 1);
        if (est.n_hits == 0) {
            ++zero_hit;
            continue;
        }
        auto probe = [&](const BoundReport& rep) {
            if (!rep.valid) return;
            if (!(std::exp(rep.log_bound) >= est.ci_low)) ++bad;
        };
        probe(chernoff_kinf_bound(dp, inst.u));
        probe(unit_mass_perturbed_bound(dp, inst.u));
        probe(beyond_unit_bound(dp, inst.u, PerturbationRule::S0()));
        probe(beyond_unit_bound(dp, inst.u, PerturbationRule::SInf()));
    }
    const double secs = timer.seconds();
    std::ostringstream msg;
    msg << "10 fixed d=3 instances at n=1e6, seed 0: " << bad << " CI violations, "
        << zero_hit << " zero-hit, " << secs << " s (target < 120 s)";
    const bool pass = bad == 0 && zero_hit == 0 && secs < 120.0;
    report(9, pass, msg.str());
    REQUIRE(pass);
}

TEST_CASE("acceptance 10: superadditivity suites") {
    Timer timer;
    long long half_fail = 0, half_inconclusive = 0, convex_fail = 0;
    bool has_nonzero_eta = false;
    for (const auto& inst : suites::superadditivity_instances()) {
        const FiniteSupport nu(inst.weights, inst.payoffs);
        Perturbation eta{inst.eta, 0.0};
        for (double m : inst.eta) eta.total += m;
        has_nonzero_eta = has_nonzero_eta || eta.total > 0.0;
        const auto rec =
            check_superadditivity_halfspace(nu, eta, inst.u, inst.s, inst.t, 1000000, 0);
        half_fail += rec.verdict == Verdict::fail;
        half_inconclusive += rec.verdict == Verdict::inconclusive;
    }
    for (const auto& inst : suites::convex_instances()) {
        const auto rec = check_superadditivity_convex(inst.nu, inst.p_ref, inst.x_atom,
                                                      inst.s, inst.t, 1000000, 0);
        convex_fail += rec.verdict != Verdict::pass;
    }
    const double secs = timer.seconds();
    std::ostringstream msg;
    msg << "halfspace: 0 fails required, got " << half_fail << " (" << half_inconclusive
        << " inconclusive); convex: " << convex_fail << " non-pass; " << secs << " s";
    const bool pass = half_fail == 0 && convex_fail == 0 && has_nonzero_eta;
    report(10, pass, msg.str());
    REQUIRE(pass);
}

TEST_CASE("acceptance 11: dirichlet-multinomial correspondence") {
    Timer timer;
    long long fails = 0;
    bool saw_exact_half = false;
    for (const auto& inst : suites::correspondence_instances()) {
        const auto rec =
            check_dirichlet_multinomial(inst.n_trials, inst.p, inst.thresholds, 1000000, 0);
        fails += rec.verdict == Verdict::fail;
        if (inst.n_trials == 1 && rec.detail[0].second == 0.5) saw_exact_half = true;
    }
    const double secs = timer.seconds();
    std::ostringstream msg;
    msg << "10 instances, exact value inside the 99.9% CI; includes the exact-1/2 case: "
        << (saw_exact_half ? "yes" : "no") << "; " << secs << " s";
    const bool pass = fails == 0 && saw_exact_half;
    report(11, pass, msg.str());
    REQUIRE(pass);
}

TEST_CASE("acceptance 12: sampler calibration") {
    Timer timer;
    // KS test of the d=2 first marginal against the exact Beta cdf
    const DirichletParams d(3.0, FiniteSupport({0.4, 0.6}, {1.0, 0.0}));
    const int n = 100000;
    std::vector<double> xs(n);
    Rng rng = Rng::for_stream(123, 0);
    for (int i = 0; i < n; ++i) xs[i] = sample_dirichlet(d, rng)[0];
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        const double cdf = beta_cdf(1.2, 1.8, xs[i]);
        ks = std::max(ks, std::fabs(cdf - (i + 1.0) / n));
        ks = std::max(ks, std::fabs(cdf - static_cast<double>(i) / n));
    }
    const double ks_critical = 1.628 / std::sqrt(static_cast<double>(n));

    // CI coverage: 1000 replications of a known-tail instance at 99%
    const double exact = beta_tail(1.2, 1.8, 0.35);
    int covered = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const auto est = estimate_tail(d, 0.35, 2000, 1000 + rep, 0.99, 1);
        if (est.ci_low <= exact && exact <= est.ci_high) ++covered;
    }
    const double secs = timer.seconds();
    std::ostringstream msg;
    msg << "KS " << ks << " (critical " << ks_critical << "); 99% CI coverage " << covered
        << "/1000 (need >= 985); " << secs << " s";
    const bool pass = ks < ks_critical && covered >= 985;
    report(12, pass, msg.str());
    REQUIRE(pass);
}

TEST_CASE("acceptance 13: check suite determinism across runs and workers") {
    Timer timer;
    auto run_check = [&](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        cli::run_cli(args, out, err);
        return out.str();
    };
    const std::vector<std::string> base = {"check", "--suite", "all", "--seed", "42"};
    std::vector<std::string> more_workers = base;
    more_workers.insert(more_workers.end(), {"--workers", "4"});
    const std::string run1 = run_check(base);
    const std::string run2 = run_check(base);
    const std::string run3 = run_check(more_workers);
    const double secs = timer.seconds();
    std::ostringstream msg;
    msg << "three runs (repeat + 4 workers): " << run1.size() << " bytes each, identical: "
        << (run1 == run2 && run1 == run3 ? "yes" : "NO") << "; " << secs << " s";
    const bool pass = !run1.empty() && run1 == run2 && run1 == run3;
    report(13, pass, msg.str());
    REQUIRE(pass);
}
