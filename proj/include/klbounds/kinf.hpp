#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "klbounds/special_functions.hpp"

// Information projection K_inf(nu, u, f) = inf { KL(nu||mu) : E_mu[f] >= u }
// on finite supports, solved through its dual: the concave one-dimensional
// program max over lambda in [0, 1/(f_max - u)] of E_nu[log(1 - lambda (f - u))].

namespace klbounds {

/// A finite probability vector paired with payoff values on the same atoms.
struct FiniteSupport {
    std::vector<double> weights;
    std::vector<double> payoffs;

    FiniteSupport(std::vector<double> w, std::vector<double> f)
        : weights(std::move(w)), payoffs(std::move(f)) {
        if (weights.empty() || weights.size() != payoffs.size())
            detail::domain_fail("FiniteSupport: weights/payoffs must be non-empty and equal length");
        double sum = 0.0;
        for (double wi : weights) {
            if (!(wi >= 0.0) || !std::isfinite(wi))
                detail::domain_fail("FiniteSupport: weights must be finite and >= 0");
            sum += wi;
        }
        if (std::fabs(sum - 1.0) > 1e-12)
            detail::domain_fail("FiniteSupport: weights must sum to 1 within 1e-12");
        for (double fi : payoffs)
            if (!std::isfinite(fi)) detail::domain_fail("FiniteSupport: payoffs must be finite");
    }

    std::size_t d() const { return weights.size(); }
    double f_min() const { return *std::min_element(payoffs.begin(), payoffs.end()); }
    double f_max() const { return *std::max_element(payoffs.begin(), payoffs.end()); }
    double mean_payoff() const {
        double m = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) m += weights[i] * payoffs[i];
        return m;
    }
};

/// Solution of the dual program together with its optimality certificate.
///   value      : K_inf itself (>= 0, possibly +inf in the u = f_max extension)
///   lambda_star: argmax in [0, 1/(f_max - u)]
///   dual_slack : E_nu[1 / (1 - lambda* (f - u))]; <= 1 at the optimum,
///                = 1 when lambda* is interior
///   at_boundary: lambda* sits on the right end of the interval
///   u_at_fmax  : u = f_max extension case (outside the dual formula's domain)
struct KinfSolution {
    double value = 0.0;
    double lambda_star = 0.0;
    double dual_slack = 1.0;
    bool at_boundary = false;
    bool u_at_fmax = false;
};

namespace detail {

struct KinfCore {
    double lambda_star = 0.0;
    double mass_value = 0.0;  // sum_i m_i log(1 - lambda (f_i - u)); = total_mass * K_inf
    double dual_slack = 1.0;  // mass-normalized
    bool at_boundary = false;
};

// Dual solve on a raw non-negative mass vector (not necessarily normalized);
// mass_value scales linearly with the total mass, lambda* does not depend on
// it. Requires u < max(payoffs) and at least one strictly positive mass.
inline KinfCore kinf_core(std::span<const double> masses, std::span<const double> payoffs,
                          double u) {
    const std::size_t d = masses.size();
    double total = 0.0, dot = 0.0, fmax = -pos_inf;
    for (std::size_t i = 0; i < d; ++i) {
        total += masses[i];
        dot += masses[i] * payoffs[i];
        fmax = std::max(fmax, payoffs[i]);
    }

    KinfCore out;
    if (dot >= u * total) return out;  // nu itself feasible: K_inf = 0, lambda* = 0

    double mass_at_top = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        if (payoffs[i] == fmax) mass_at_top += masses[i];

    const double lambda_max = 1.0 / (fmax - u);

    // phi'(lambda): decreasing (phi is strictly concave where finite).
    // Zero-mass atoms are excluded: they contribute nothing but their
    // denominator may vanish at the boundary.
    auto deriv = [&](double lam) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            if (masses[i] == 0.0) continue;
            s += masses[i] * (u - payoffs[i]) / (1.0 - lam * (payoffs[i] - u));
        }
        return s;
    };

    double lo = 0.0, hi;
    if (mass_at_top > 0.0) {
        // objective -> -inf at lambda_max; walk toward the boundary until
        // the derivative turns negative
        double eps = 0.5;
        hi = lambda_max * (1.0 - eps);
        while (deriv(hi) >= 0.0 && eps > 1e-300) {
            lo = hi;
            eps *= 0.5;
            hi = lambda_max * (1.0 - eps);
        }
    } else {
        hi = lambda_max;
        if (deriv(hi) >= 0.0) {
            // maximum attained at the boundary itself (possible only when
            // nu puts no mass on the top payoff)
            out.lambda_star = lambda_max;
            out.at_boundary = true;
        }
    }

    if (!out.at_boundary) {
        // safeguarded Newton on phi' inside [lo, hi]; quadratic steps with a
        // bisection fallback keep the bracket shrinking unconditionally
        double lam = 0.5 * (lo + hi);
        const double tol = 1e-14 * lambda_max;
        for (int it = 0; it < 200 && hi - lo > tol; ++it) {
            double g = 0.0, gp = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                if (masses[i] == 0.0) continue;
                const double den = 1.0 - lam * (payoffs[i] - u);
                const double r = (payoffs[i] - u) / den;
                g -= masses[i] * r;
                gp -= masses[i] * r * r;
            }
            if (g == 0.0) break;
            if (g > 0.0) lo = lam; else hi = lam;
            double next = lam - g / gp;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            lam = next;
        }
        out.lambda_star = lam;
    }

    double val = 0.0, slack = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        if (masses[i] == 0.0) continue;
        const double z = out.lambda_star * (payoffs[i] - u);
        val += masses[i] * std::log1p(-z);
        slack += masses[i] / (1.0 - z);
    }
    out.mass_value = std::max(0.0, val);
    out.dual_slack = slack / total;
    return out;
}

}  // namespace detail

/// Solve K_inf(nu, u, f) by the dual formula. Domain: u in [f_min, f_max]
/// where f_min/f_max are the extremes of the full payoff vector; u = f_max is
/// an extension flagged through KinfSolution::u_at_fmax (value 0 if nu is
/// concentrated on the top payoff, +inf otherwise).
inline KinfSolution kinf_variational(const FiniteSupport& nu, double u) {
    const double fmin = nu.f_min(), fmax = nu.f_max();
    if (!std::isfinite(u)) detail::domain_fail("kinf_variational: u must be finite");

    if (fmin == fmax) {
        if (u <= fmax) return {};  // constant payoff, constraint already met
        detail::domain_fail("kinf_variational: all payoffs equal and u above them");
    }
    if (u < fmin)
        detail::domain_fail("kinf_variational: requires u >= f_min");
    if (u > fmax)
        detail::domain_fail("kinf_variational: requires u <= f_max");

    if (u == fmax) {
        double top = 0.0;
        for (std::size_t i = 0; i < nu.d(); ++i)
            if (nu.payoffs[i] == fmax) top += nu.weights[i];
        KinfSolution s;
        s.u_at_fmax = true;
        if (std::fabs(top - 1.0) <= 1e-12) return s;  // nu = point mass at the target
        s.value = pos_inf;
        s.lambda_star = pos_inf;
        s.dual_slack = 0.0;
        s.at_boundary = true;
        return s;
    }

    const auto core = detail::kinf_core(nu.weights, nu.payoffs, u);
    KinfSolution s;
    s.value = core.mass_value;  // weights sum to 1
    s.lambda_star = core.lambda_star;
    s.dual_slack = core.dual_slack;
    s.at_boundary = core.at_boundary;
    return s;
}

/// Closed-form special case for indicator payoffs: K_inf = kl(nu_mass || u).
inline double kinf_indicator(double nu_mass, double u) {
    if (!(nu_mass >= 0.0 && nu_mass <= 1.0) || !(u >= 0.0 && u <= 1.0))
        detail::domain_fail("kinf_indicator: requires arguments in [0, 1]");
    return kl_binary(nu_mass, u);
}

/// Primal brute force: exhaustive search over the simplex lattice of
/// resolution 1/grid_steps restricted to E_mu[f] >= u, followed by one local
/// refinement pass at 10x resolution around the incumbent. Oracle-scale only
/// (d <= 4); intended as an independent check of kinf_variational.
inline double kinf_bruteforce(const FiniteSupport& nu, double u, int grid_steps) {
    const std::size_t d = nu.d();
    if (d > 4) detail::domain_fail("kinf_bruteforce: oracle limited to d <= 4");
    if (grid_steps < 1) detail::domain_fail("kinf_bruteforce: grid_steps must be >= 1");
    if (u > nu.f_max()) detail::domain_fail("kinf_bruteforce: requires u <= f_max");
    if (nu.mean_payoff() >= u) return 0.0;  // nu itself feasible

    const auto& w = nu.weights;
    const auto& f = nu.payoffs;

    auto kl_of = [&](const double* mu) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            if (w[i] == 0.0) continue;
            if (mu[i] == 0.0) return pos_inf;
            s += w[i] * std::log(w[i] / mu[i]);
        }
        return std::max(0.0, s);
    };

    double best = pos_inf;
    std::array<long, 4> best_k{};

    // enumerate k in Z^d >= 0 with sum k = steps, mu = k / steps; a radius
    // >= 0 restricts the scan to the box |k_i - center_i| <= radius
    auto scan = [&](long steps, std::array<long, 4> center, long radius) {
        std::array<long, 4> k{};
        std::array<double, 4> mu{};
        const double inv = 1.0 / static_cast<double>(steps);
        auto rec = [&](auto&& self, std::size_t pos, long rem) -> void {
            if (pos + 1 == d) {
                if (radius >= 0 && std::labs(rem - center[pos]) > radius) return;
                k[pos] = rem;
                double e = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    mu[i] = k[i] * inv;
                    e += mu[i] * f[i];
                }
                if (e < u) return;
                const double v = kl_of(mu.data());
                if (v < best) {
                    best = v;
                    best_k = k;
                }
                return;
            }
            long lo = 0, hi = rem;
            if (radius >= 0) {
                lo = std::max(lo, center[pos] - radius);
                hi = std::min(hi, center[pos] + radius);
            }
            for (long v = lo; v <= hi; ++v) {
                k[pos] = v;
                self(self, pos + 1, rem - v);
            }
        };
        rec(rec, 0, steps);
    };

    scan(grid_steps, {}, -1);
    if (!std::isfinite(best)) return pos_inf;  // no feasible lattice point

    // refinement: 10x resolution around the incumbent. The box spans a few
    // coarse cells: the coarse winner can sit a couple of cells away from
    // the true minimizer when the feasibility boundary cuts the lattice
    // unfavorably.
    std::array<long, 4> center{};
    for (std::size_t i = 0; i < d; ++i) center[i] = best_k[i] * 10;
    scan(10L * grid_steps, center, 40);
    return best;
}

}  // namespace klbounds
