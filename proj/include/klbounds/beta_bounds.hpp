#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "klbounds/special_functions.hpp"

// Exponential upper bounds on log P(B >= u) for B ~ Beta(a, b): the four
// classical bounds (Hoeffding, Bernstein, KL, perturbed KL) plus the
// generalized perturbed-KL bound whose admissible perturbation size comes
// from the S-family closed forms. Validity ranges are reported, never
// silently enforced: an out-of-range bound still echoes its formula value
// for diagnostics, with valid = false.

namespace klbounds {

struct BetaParams {
    double a;
    double b;

    BetaParams(double a_, double b_) : a(a_), b(b_) {
        if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
            detail::domain_fail("BetaParams: requires finite a, b > 0");
    }

    double mean() const { return a / (a + b); }
};

enum class BoundKind {
    hoeffding,
    bernstein,
    kl,
    perturbed_kl_table1,
    perturbed_kl_general,
    chernoff_kinf,
    unit_mass_perturbed,
    beyond_unit_mass,
};

inline const char* to_string(BoundKind k) {
    switch (k) {
        case BoundKind::hoeffding: return "hoeffding";
        case BoundKind::bernstein: return "bernstein";
        case BoundKind::kl: return "kl";
        case BoundKind::perturbed_kl_table1: return "perturbed-table1";
        case BoundKind::perturbed_kl_general: return "perturbed-general";
        case BoundKind::chernoff_kinf: return "chernoff";
        case BoundKind::unit_mass_perturbed: return "unit-mass";
        case BoundKind::beyond_unit_mass: return "beyond-unit";
    }
    return "?";
}

/// Which perturbation magnitude to use in the generalized bounds.
struct PerturbationRule {
    enum class Kind { s0, s1, s2, s_inf, explicit_eta };
    Kind kind = Kind::s0;
    double eta = 0.0;  // used by explicit_eta only

    static PerturbationRule S0() { return {Kind::s0, 0.0}; }
    static PerturbationRule S1() { return {Kind::s1, 0.0}; }
    static PerturbationRule S2() { return {Kind::s2, 0.0}; }
    static PerturbationRule SInf() { return {Kind::s_inf, 0.0}; }
    static PerturbationRule Explicit(double eta) {
        if (!(eta >= 0.0)) detail::domain_fail("PerturbationRule: explicit eta must be >= 0");
        return {Kind::explicit_eta, eta};
    }
};

inline const char* to_string(PerturbationRule::Kind k) {
    switch (k) {
        case PerturbationRule::Kind::s0: return "s0";
        case PerturbationRule::Kind::s1: return "s1";
        case PerturbationRule::Kind::s2: return "s2";
        case PerturbationRule::Kind::s_inf: return "sinf";
        case PerturbationRule::Kind::explicit_eta: return "eta";
    }
    return "?";
}

/// One bound evaluation: the kind, the log-bound value, whether the
/// statement's validity range is met, the perturbation actually used (for
/// perturbed kinds), and an echo of inputs and intermediates.
struct BoundReport {
    BoundKind kind = BoundKind::hoeffding;
    double log_bound = 0.0;
    bool valid = false;
    std::optional<double> eta_used;
    std::vector<std::pair<std::string, double>> detail;
};

namespace detail {

inline void check_u_closed(double u, const char* who) {
    if (!(u >= 0.0 && u <= 1.0))
        domain_fail(std::string(who) + ": requires u in [0, 1], got u=" + std::to_string(u));
}

inline void check_u_open(double u, const char* who) {
    if (!(u > 0.0 && u < 1.0))
        domain_fail(std::string(who) + ": requires u in (0, 1), got u=" + std::to_string(u));
}

}  // namespace detail

/// log P(B >= u) <= -2 (a+b+1) (u - a/(a+b))^2, valid for u >= a/(a+b).
inline BoundReport hoeffding_bound(BetaParams p, double u) {
    detail::check_u_closed(u, "hoeffding_bound");
    const double mean = p.mean();
    BoundReport r;
    r.kind = BoundKind::hoeffding;
    r.log_bound = -2.0 * (p.a + p.b + 1.0) * (u - mean) * (u - mean);
    r.valid = u >= mean;
    r.detail = {{"a", p.a}, {"b", p.b}, {"u", u}, {"mean", mean}};
    return r;
}

/// Bernstein-type bound with the positive-part correction term.
inline BoundReport bernstein_bound(BetaParams p, double u) {
    detail::check_u_closed(u, "bernstein_bound");
    const double n = p.a + p.b;
    const double gap = n * u - p.a;
    const double den =
        2.0 * p.a * p.b / (n + 1.0) + 4.0 * gap * std::max(0.0, p.b - p.a) / (3.0 * (n + 2.0));
    BoundReport r;
    r.kind = BoundKind::bernstein;
    r.log_bound = den != 0.0 ? -gap * gap / den : -pos_inf;
    r.valid = u >= p.mean();
    r.detail = {{"a", p.a}, {"b", p.b}, {"u", u}, {"mean", p.mean()}};
    return r;
}

/// log P(B >= u) <= -(a+b) kl(a/(a+b) || u), valid for u >= a/(a+b).
inline BoundReport kl_bound(BetaParams p, double u) {
    detail::check_u_closed(u, "kl_bound");
    const double mean = p.mean();
    BoundReport r;
    r.kind = BoundKind::kl;
    r.log_bound = -(p.a + p.b) * kl_binary(mean, u);
    r.valid = u >= mean;
    r.detail = {{"a", p.a}, {"b", p.b}, {"u", u}, {"mean", mean}};
    return r;
}

/// Perturbed KL bound at the fixed perturbation eta = 1 + (a-1)/(b+1);
/// requires a >= 1 and u >= (a-eta)/(a+b-eta) to be valid.
inline BoundReport perturbed_kl_bound_table1(BetaParams p, double u) {
    detail::check_u_closed(u, "perturbed_kl_bound_table1");
    const double eta = 1.0 + (p.a - 1.0) / (p.b + 1.0);
    const double t = p.a + p.b - eta;
    const double x = (p.a - eta) / t;
    BoundReport r;
    r.kind = BoundKind::perturbed_kl_table1;
    r.eta_used = eta;
    r.log_bound = (x >= 0.0 && x <= 1.0) ? -t * kl_binary(x, u)
                                         : std::numeric_limits<double>::quiet_NaN();
    r.valid = p.a >= 1.0 && u >= x;
    r.detail = {{"a", p.a}, {"b", p.b}, {"u", u}, {"eta", eta}, {"x", x}};
    return r;
}

namespace detail {

// extended-precision evaluation; the expression is badly conditioned near
// its root (the leading factor cancels to ~u^eta), so intermediates are kept
// in long double
inline long double R_eval(long double a, long double b, long double u, long double eta) {
    return (u * b - (1.0L - u) * (a - eta)) / b * std::exp(-eta * std::log(u)) - 1.0L;
}

}  // namespace detail

/// R(eta) = (u b - (1-u)(a-eta)) / b * u^-eta - 1; S_inf is its unique
/// non-negative root.
inline double R_function(BetaParams p, double u, double eta) {
    detail::check_u_open(u, "R_function");
    return static_cast<double>(detail::R_eval(p.a, p.b, u, eta));
}

inline double s0(BetaParams p, double u) {
    detail::check_u_open(u, "s0");
    return p.a - p.b * (p.a - 1.0) / (p.b + 1.0);
}

inline double s1(BetaParams p, double u) {
    detail::check_u_open(u, "s1");
    const double l = std::log(1.0 / u);
    return p.a - p.b * (p.a - 1.0) / (p.b + (1.0 / u - 1.0) / l);
}

inline double s2(BetaParams p, double u) {
    detail::check_u_open(u, "s2");
    const double l = std::log(1.0 / u);
    const double w = 1.0 / u - 1.0;
    const double c = p.b * l + w;
    const double disc = std::sqrt(1.0 + 2.0 * w * w * l * (p.a - 1.0) / (c * c));
    return p.a - p.b * c * (disc - 1.0) / (w * w);
}

inline double s_inf(BetaParams p, double u) {
    detail::check_u_open(u, "s_inf");
    const long double a = p.a, b = p.b, ul = u;
    const long double l = -std::log(ul);
    const long double shift = a - b * ul / (1.0L - ul);
    // argument of W0 kept in log form: u^shift under/overflows readily
    const long double log_arg =
        std::log(b) + shift * std::log(ul) + std::log(l) - std::log1p(-ul);

    long double w;
    if (log_arg > 11300.0L) {
        // e^log_arg overflows even in long double: W0(e^y) ~ y - log y
        w = log_arg - std::log(log_arg);
        for (int i = 0; i < 6; ++i) w -= (w + std::log(w) - log_arg) * w / (w + 1.0L);
    } else {
        const long double arg = std::exp(log_arg);
        // Halley for w e^w = arg (arg >= 0 here, so no branch-point care)
        w = arg < 1.0L ? arg : std::log(arg) - std::log(std::log(arg) + 1e-30L);
        if (w <= 0.0L) w = arg > 0.0L ? arg : 0.0L;
        for (int i = 0; i < 80; ++i) {
            const long double e = std::exp(w);
            const long double f = w * e - arg;
            const long double step =
                f / (e * (w + 1.0L) - (w + 2.0L) * f / (2.0L * w + 2.0L));
            w -= step;
            if (std::fabs(step) <= 1e-19L * std::max(w, 1e-300L)) break;
        }
        // belt-and-braces: bisection fallback on R if the W-based root fails
        // to satisfy its defining equation
        if (std::fabs(w * std::exp(w) - arg) > 1e-10L * std::max(1.0L, arg)) {
            long double lo = 0.0L, hi = a + b * ul / (1.0L - ul) + 10.0L;
            while (detail::R_eval(a, b, ul, hi) < 0.0L) hi *= 2.0L;
            for (int i = 0; i < 300 && hi - lo > 1e-18L * hi; ++i) {
                const long double mid = 0.5L * (lo + hi);
                (detail::R_eval(a, b, ul, mid) < 0.0L ? lo : hi) = mid;
            }
            return static_cast<double>(0.5L * (lo + hi));
        }
    }
    return static_cast<double>(shift + w / l);
}

/// Admissible perturbation magnitude for the generalized bound: S_i(a,b,u)
/// when a >= 1, a otherwise; explicit values are clamped into the proven-safe
/// interval [0, min(a, S_inf)].
struct EtaCap {
    double eta;
    bool clamped;
};

inline EtaCap eta_cap(BetaParams p, double u, PerturbationRule rule) {
    detail::check_u_open(u, "eta_cap");
    using K = PerturbationRule::Kind;
    if (rule.kind == K::explicit_eta) {
        const double cap = std::min(p.a, s_inf(p, u));
        const double eta = std::min(rule.eta, cap);
        return {eta, eta != rule.eta};
    }
    if (p.a < 1.0) return {p.a, false};
    switch (rule.kind) {
        case K::s0: return {s0(p, u), false};
        case K::s1: return {s1(p, u), false};
        case K::s2: return {s2(p, u), false};
        default: return {s_inf(p, u), false};
    }
}

/// Generalized perturbed KL bound: with eta from the rule and
/// x = (a-eta)/(a+b-eta),
///   log P(B >= u) <= -(a+b-eta) kl(x || u)          (relaxed form)
/// valid when u > x. The tighter difference form
///   log P(B >= u) <= log P(B >= x) - (a+b-eta) kl(x || u)
/// is carried in detail under "difference_form".
inline BoundReport perturbed_kl_bound_general(BetaParams p, double u, PerturbationRule rule) {
    detail::check_u_open(u, "perturbed_kl_bound_general");
    const auto cap = eta_cap(p, u, rule);
    const double eta = cap.eta;
    const double t = p.a + p.b - eta;
    // eta <= min(a, S_inf) up to rounding; clamp so x stays a probability
    const double x = std::clamp((p.a - eta) / t, 0.0, 1.0);
    BoundReport r;
    r.kind = BoundKind::perturbed_kl_general;
    r.eta_used = eta;
    r.log_bound = -t * kl_binary(x, u);
    r.valid = u > x;
    const double log_tail_at_x = std::log(beta_tail(p.a, p.b, x));
    r.detail = {{"a", p.a},
                {"b", p.b},
                {"u", u},
                {"eta", eta},
                {"x", x},
                {"clamped", cap.clamped ? 1.0 : 0.0},
                {"difference_form", log_tail_at_x + r.log_bound}};
    return r;
}

}  // namespace klbounds
