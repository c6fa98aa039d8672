#pragma once

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "klbounds/beta_bounds.hpp"
#include "klbounds/kinf.hpp"

// Tail bounds for P(E_X[f] >= u) where X ~ Dir(alpha * nu0) on a finite
// support: the Chernoff-K_inf bound, the unit-mass perturbed bound with its
// closed-form maximizer, and the beyond-unit-mass bound that perturbs a
// single payoff level.

namespace klbounds {

struct DirichletParams {
    double alpha;
    FiniteSupport base;  // nu0 with payoffs f

    DirichletParams(double alpha_, FiniteSupport base_)
        : alpha(alpha_), base(std::move(base_)) {
        if (!(alpha > 0.0) || !std::isfinite(alpha))
            detail::domain_fail("DirichletParams: requires finite alpha > 0");
        for (double w : base.weights)
            if (!(w > 0.0))
                detail::domain_fail("DirichletParams: base weights must be strictly positive");
    }
};

/// A non-negative measure over the atoms, subtracted from alpha*nu0 inside
/// the perturbed bounds.
struct Perturbation {
    std::vector<double> masses;
    double total = 0.0;
};

namespace detail {

inline void check_u_in_payoff_range(const FiniteSupport& base, double u, const char* who) {
    if (!std::isfinite(u)) domain_fail(std::string(who) + ": u must be finite");
    if (u < base.f_min() || u >= base.f_max())
        domain_fail(std::string(who) + ": requires u in [f_min, f_max)");
}

}  // namespace detail

/// log P(E_X[f] >= u) <= -alpha * K_inf(nu0, u, f).
inline BoundReport chernoff_kinf_bound(const DirichletParams& d, double u) {
    detail::check_u_in_payoff_range(d.base, u, "chernoff_kinf_bound");
    const auto sol = kinf_variational(d.base, u);
    BoundReport r;
    r.kind = BoundKind::chernoff_kinf;
    r.log_bound = -d.alpha * sol.value;
    r.valid = true;
    r.detail = {{"alpha", d.alpha}, {"u", u}, {"kinf", sol.value}, {"lambda_star", sol.lambda_star}};
    return r;
}

namespace detail {

struct EtaStar {
    Perturbation eta;
    double u1;
};

}  // namespace detail

/// Closed-form maximizer of the unit-mass perturbed exponent: all of
/// alpha*nu0 above the threshold u1, plus whatever deficit remains spread
/// over the atoms at u1 proportionally to nu0. u1 is the smallest level
/// x >= u whose strict super-level alpha-mass is <= 1.
inline detail::EtaStar unit_mass_eta_star_with_threshold(const DirichletParams& d, double u) {
    detail::check_u_in_payoff_range(d.base, u, "unit_mass_eta_star");
    const auto& w = d.base.weights;
    const auto& f = d.base.payoffs;
    const std::size_t n = d.base.d();

    auto mass_above = [&](double x) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (f[i] > x) m += d.alpha * w[i];
        return m;
    };

    double u1 = u;
    if (mass_above(u) > 1.0) {
        // the super-level mass is a right-continuous decreasing step
        // function of x; scan the distinct payoff values above u
        std::vector<double> levels(f.begin(), f.end());
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        for (double v : levels) {
            if (v < u) continue;
            if (mass_above(v) <= 1.0) {
                u1 = v;
                break;
            }
        }
    }

    Perturbation eta;
    eta.masses.assign(n, 0.0);
    double mass_a1 = 0.0, weight_a0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (f[i] > u1) {
            eta.masses[i] = d.alpha * w[i];
            mass_a1 += d.alpha * w[i];
        } else if (f[i] == u1) {
            weight_a0 += w[i];
        }
    }
    // deficit spread over the u1-level atoms; dropped when that level has no
    // mass, and capped by the alpha-mass available there (the cap can bind
    // only when u1 == u, where the level contributes zero to the exponent)
    const double deficit = std::max(0.0, 1.0 - mass_a1);
    if (weight_a0 > 0.0 && deficit > 0.0) {
        const double fill = std::min(deficit, d.alpha * weight_a0);
        for (std::size_t i = 0; i < n; ++i)
            if (f[i] == u1) eta.masses[i] = fill * w[i] / weight_a0;
    }
    eta.total = 0.0;
    for (double m : eta.masses) eta.total += m;
    return {std::move(eta), u1};
}

inline Perturbation unit_mass_eta_star(const DirichletParams& d, double u) {
    return unit_mass_eta_star_with_threshold(d, u).eta;
}

/// Unit-mass perturbed bound:
///   log P(E_X[f] >= u) <= -(alpha - eta*(O)) K_inf((alpha nu0 - eta*)/(alpha - eta*(O)), u, f).
inline BoundReport unit_mass_perturbed_bound(const DirichletParams& d, double u) {
    const auto star = unit_mass_eta_star_with_threshold(d, u);
    const auto& eta = star.eta;
    const double t = d.alpha - eta.total;
    if (!(t > 0.0))
        detail::domain_fail("unit_mass_perturbed_bound: degenerate scale alpha - eta(O) <= 0");

    const std::size_t n = d.base.d();
    std::vector<double> masses(n);
    for (std::size_t i = 0; i < n; ++i)
        masses[i] = std::max(0.0, d.alpha * d.base.weights[i] - eta.masses[i]);

    // K_inf of the tilted base, evaluated on raw masses: the mass-weighted
    // value is exactly (alpha - eta(O)) * K_inf(tilted)
    const auto core = detail::kinf_core(masses, d.base.payoffs, u);
    BoundReport r;
    r.kind = BoundKind::unit_mass_perturbed;
    r.log_bound = -core.mass_value;
    r.valid = true;
    r.eta_used = eta.total;
    r.detail = {{"alpha", d.alpha},
                {"u", u},
                {"u_1", star.u1},
                {"eta_total", eta.total},
                {"scale", t},
                {"lambda_star", core.lambda_star}};
    return r;
}

/// Grid-search certification of the unit-mass maximizer: exhaustively scans
/// eta over the box prod_i [0, min(1, alpha nu0_i)] intersected with
/// sum eta_i <= 1 and returns the best exponent found. d <= 3 atoms only.
inline double eta_star_oracle(const DirichletParams& d, double u, int grid_steps,
                              int workers = 1) {
    detail::check_u_in_payoff_range(d.base, u, "eta_star_oracle");
    const std::size_t n = d.base.d();
    if (n > 3) detail::domain_fail("eta_star_oracle: oracle limited to d <= 3 atoms");
    if (grid_steps < 1) detail::domain_fail("eta_star_oracle: grid_steps must be >= 1");

    std::vector<double> cap(n);
    for (std::size_t i = 0; i < n; ++i)
        cap[i] = std::min(1.0, d.alpha * d.base.weights[i]);

    const auto& f = d.base.payoffs;
    const std::vector<double> aw = [&] {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = d.alpha * d.base.weights[i];
        return v;
    }();

    auto exponent_at = [&](const double* eta) {
        double masses[3];
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            masses[i] = std::max(0.0, aw[i] - eta[i]);
            total += masses[i];
        }
        if (total <= 1e-12) return -pos_inf;  // scale collapsed
        return detail::kinf_core({masses, n}, {f.data(), n}, u).mass_value;
    };

    // partition the outer axis across workers; max-reduction is
    // order-independent, so the result does not depend on the worker count
    const int nw = std::max(1, workers);
    std::vector<double> best_per(nw, -pos_inf);
    auto run = [&](int wk) {
        double eta[3] = {0, 0, 0};
        double best = -pos_inf;
        for (int i0 = wk; i0 <= grid_steps; i0 += nw) {
            eta[0] = cap[0] * i0 / grid_steps;
            if (eta[0] > 1.0) break;
            if (n == 1) {
                best = std::max(best, exponent_at(eta));
                continue;
            }
            for (int i1 = 0; i1 <= grid_steps; ++i1) {
                eta[1] = cap[1] * i1 / grid_steps;
                if (eta[0] + eta[1] > 1.0) break;
                if (n == 2) {
                    best = std::max(best, exponent_at(eta));
                    continue;
                }
                for (int i2 = 0; i2 <= grid_steps; ++i2) {
                    eta[2] = cap[2] * i2 / grid_steps;
                    if (eta[0] + eta[1] + eta[2] > 1.0) break;
                    best = std::max(best, exponent_at(eta));
                }
            }
        }
        best_per[wk] = best;
    };
    if (nw == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nw);
        for (int wk = 0; wk < nw; ++wk) pool.emplace_back(run, wk);
        for (auto& th : pool) th.join();
    }
    double best = -pos_inf;
    for (double b : best_per) best = std::max(best, b);
    return best;
}

/// Beyond-unit-mass bound: perturb a single payoff level v > u by the
/// admissible mass M_i(a_v, alpha - a_v, u/v), where a_v is the alpha-mass
/// at that level, and take the best candidate level.
inline BoundReport beyond_unit_bound(const DirichletParams& d, double u,
                                     PerturbationRule rule) {
    detail::check_u_in_payoff_range(d.base, u, "beyond_unit_bound");
    const auto& w = d.base.weights;
    const auto& f = d.base.payoffs;
    const std::size_t n = d.base.d();

    std::vector<double> levels(f.begin(), f.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    BoundReport r;
    r.kind = BoundKind::beyond_unit_mass;
    double best = -pos_inf;
    double best_v = 0.0, best_m = 0.0;
    int skipped = 0;

    std::vector<double> masses(n);
    for (double v : levels) {
        if (!(v > u) || !(v > 0.0)) continue;  // candidate levels: v > max(u, 0)
        double level_weight = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (f[i] == v) level_weight += w[i];
        const double a_v = d.alpha * level_weight;
        const double b_v = d.alpha - a_v;

        double m_v;
        const double ratio = u / v;
        if (a_v < 1.0 && rule.kind != PerturbationRule::Kind::explicit_eta) {
            m_v = a_v;  // small-mass branch of M_i
        } else if (b_v > 0.0 && ratio > 0.0 && ratio < 1.0) {
            m_v = eta_cap(BetaParams(a_v, b_v), ratio, rule).eta;
        } else {
            ++skipped;  // S-family needs u/v in (0,1) and a positive b
            continue;
        }
        if (!(d.alpha - m_v > 0.0)) {
            ++skipped;
            continue;
        }

        // spread m_v over the f = v atoms proportionally to nu0
        for (std::size_t i = 0; i < n; ++i) {
            masses[i] = d.alpha * w[i];
            if (f[i] == v) masses[i] = std::max(0.0, masses[i] - m_v * w[i] / level_weight);
        }
        const double expo = detail::kinf_core(masses, f, u).mass_value;
        if (expo > best) {
            best = expo;
            best_v = v;
            best_m = m_v;
        }
    }

    if (best == -pos_inf)
        detail::domain_fail("beyond_unit_bound: no admissible candidate level v > u");

    r.log_bound = -best;
    r.valid = true;
    r.eta_used = best_m;
    r.detail = {{"alpha", d.alpha},
                {"u", u},
                {"v", best_v},
                {"m_v", best_m},
                {"skipped_candidates", static_cast<double>(skipped)}};
    return r;
}

}  // namespace klbounds
