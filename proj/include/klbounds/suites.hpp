#pragma once

#include <cstddef>
#include <vector>

#include "klbounds/beta_bounds.hpp"

// Fixed instance tables for the empirical property suites. Shared by the
// CLI check command and the acceptance tests so both exercise the same
// configurations.

namespace klbounds::suites {

struct HalfspaceInstance {
    const char* name;
    std::vector<double> weights;
    std::vector<double> payoffs;
    std::vector<double> eta;
    double u, s, t;
};

inline const std::vector<HalfspaceInstance>& superadditivity_instances() {
    static const std::vector<HalfspaceInstance> table = {
        {"d2-unit-eta", {0.5, 0.5}, {1, 0}, {1.0, 0.0}, 0.7, 2.0, 2.0},
        {"d2-zero-eta", {0.5, 0.5}, {1, 0}, {0.0, 0.0}, 0.7, 2.0, 3.0},
        {"d2-half-eta", {0.3, 0.7}, {1, 0}, {0.5, 0.0}, 0.5, 1.0, 2.0},
        {"d2-spread-eta", {0.3, 0.7}, {1, 0}, {0.25, 0.25}, 0.5, 2.0, 2.0},
        {"d3-top-eta", {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0, 0.5, 1}, {0, 0, 1.0}, 0.6, 2.0, 2.0},
        {"d3-spread-eta", {0.2, 0.5, 0.3}, {0, 0.5, 1}, {0, 0.3, 0.7}, 0.55, 1.5, 2.5},
        {"d3-negative-payoffs", {0.2, 0.5, 0.3}, {-1, 0, 1}, {0, 0, 0.8}, 0.2, 2.0, 2.0},
        {"d2-small-scales", {0.5, 0.5}, {1, 0}, {0.0, 0.0}, 0.3, 0.5, 0.5},
        {"d4-top-eta", {0.25, 0.25, 0.25, 0.25}, {0, 1.0 / 3, 2.0 / 3, 1}, {0, 0, 0, 1.0},
         0.5, 2.0, 2.0},
        {"d2-at-mean", {0.5, 0.5}, {1, 0}, {0.6, 0.0}, 0.5, 3.0, 3.0},
    };
    return table;
}

struct ConvexInstance {
    const char* name;
    std::vector<double> nu;
    std::vector<double> p_ref;
    std::size_t x_atom;
    double s, t;
};

inline const std::vector<ConvexInstance>& convex_instances() {
    static const std::vector<ConvexInstance> table = {
        {"d3-uniform", {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.2, 0.3, 0.5}, 2, 3.0, 3.0},
        {"d3-equality-heavy", {1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 2,
         2.0, 2.0},
        {"d3-skewed", {0.5, 0.3, 0.2}, {0.4, 0.3, 0.3}, 2, 2.0, 3.0},
        {"d3-mid-atom", {0.2, 0.3, 0.5}, {0.3, 0.3, 0.4}, 1, 2.0, 2.0},
        {"d3-peaked", {0.25, 0.5, 0.25}, {0.2, 0.4, 0.4}, 2, 1.5, 1.5},
    };
    return table;
}

struct CorrespondenceInstance {
    const char* name;
    int n_trials;
    std::vector<double> p;
    std::vector<int> thresholds;
};

inline const std::vector<CorrespondenceInstance>& correspondence_instances() {
    static const std::vector<CorrespondenceInstance> table = {
        {"n1-d2-half", 1, {0.5, 0.5}, {1}},
        {"n4-d3", 4, {0.3, 0.3, 0.4}, {1, 3}},
        {"n2-d2-degenerate-k0", 2, {0.3, 0.7}, {0}},
        {"n8-d2", 8, {0.6, 0.4}, {5}},
        {"n6-d3", 6, {0.2, 0.5, 0.3}, {2, 4}},
        {"n8-d4-uniform", 8, {0.25, 0.25, 0.25, 0.25}, {2, 4, 6}},
        {"n5-d4", 5, {0.4, 0.2, 0.2, 0.2}, {1, 2, 4}},
        {"n3-d3-tied-thresholds", 3, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {1, 1}},
        {"n7-d3", 7, {0.5, 0.25, 0.25}, {3, 6}},
        {"n8-d3-leading-zero", 8, {0.1, 0.6, 0.3}, {0, 4}},
    };
    return table;
}

/// One property of the S-family / R-function suite, summarized over the
/// evaluation grid.
struct SFamilyCheck {
    const char* check;
    long long points = 0;
    long long violations = 0;
    double worst = 0.0;  // most violating margin observed
};

/// Runs the S-family property grid: ordering, root residual, sign of R on
/// [0, S_inf], the a >= 1 threshold, and monotonicity in u. The root
/// residual is compared against a conditioning-aware tolerance: near the
/// root, |dR/deta| ~ (1-u)/(b u^eta*), so the smallest residual reachable
/// with a double-valued eta is about ulp(eta*) times that derivative.
inline std::vector<SFamilyCheck> run_s_family_suite() {
    const double ab_grid[] = {0.5, 1, 2, 5, 10};
    SFamilyCheck ordering{"s-ordering"};
    SFamilyCheck root{"r-root-residual"};
    SFamilyCheck rsign{"r-nonpositive-below-root"};
    SFamilyCheck threshold{"sinf-below-a-iff-a-ge-1"};
    SFamilyCheck monotone{"sinf-nonincreasing-in-u"};

    for (double a : ab_grid) {
        for (double b : ab_grid) {
            BetaParams p(a, b);
            double prev_sinf = pos_inf;
            for (int i = 1; i <= 99; ++i) {
                const double u = i / 100.0;
                const double vi = s_inf(p, u);

                ++threshold.points;
                const bool below = vi <= a + 1e-10;
                if (below != (a >= 1.0)) {
                    ++threshold.violations;
                    threshold.worst = std::max(threshold.worst, std::fabs(vi - a));
                }

                if (a >= 1.0) {
                    ++ordering.points;
                    const double v0 = s0(p, u), v1 = s1(p, u), v2 = s2(p, u);
                    const double gap = std::min(
                        std::min(vi - v2, v2 - v1), std::min(v1 - v0, v0 - 0.0));
                    if (gap < -1e-10) {
                        ++ordering.violations;
                        ordering.worst = std::min(ordering.worst, gap);
                    }

                    ++monotone.points;
                    if (vi > prev_sinf + 1e-12) {
                        ++monotone.violations;
                        monotone.worst = std::max(monotone.worst, vi - prev_sinf);
                    }
                    prev_sinf = vi;

                    ++root.points;
                    const double resid = std::fabs(R_function(p, u, vi));
                    // achievable precision of the residual at this point
                    const double rprime =
                        (1.0 - u) / b * std::pow(u, -std::min(vi, 700.0 / std::log(1.0 / u))) +
                        std::log(1.0 / u);
                    const double tol = std::max(1e-9, 8.0 * (vi * 1.1e-16) * rprime);
                    if (resid > tol) {
                        ++root.violations;
                        root.worst = std::max(root.worst, resid);
                    }

                    for (int j = 1; j <= 20; ++j) {
                        ++rsign.points;
                        const double r = R_function(p, u, vi * j / 21.0);
                        if (r > 1e-12) {
                            ++rsign.violations;
                            rsign.worst = std::max(rsign.worst, r);
                        }
                    }
                }
            }
        }
    }
    return {ordering, root, rsign, threshold, monotone};
}

}  // namespace klbounds::suites
