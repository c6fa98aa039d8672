#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

// Scalar special functions and divergences. Everything here is a pure
// function of its arguments; +inf is a first-class return value for the
// divergences, never a saturation artifact.

namespace klbounds {

inline constexpr double pos_inf = std::numeric_limits<double>::infinity();

namespace detail {

[[noreturn]] inline void domain_fail(const std::string& what) {
    throw std::domain_error(what);
}

// Lanczos approximation, g = 7, 9 coefficients (Godfrey's set, widely
// reproduced from the GSL). Good to ~1e-14 relative in double.
inline constexpr double lanczos_c[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

inline double log_gamma_lanczos(double x) {
    // requires x >= 0.5
    double acc = lanczos_c[0];
    for (int k = 1; k < 9; ++k) acc += lanczos_c[k] / (x - 1.0 + k);
    const double t = x + 6.5;  // x + g - 1/2
    constexpr double half_log_2pi = 0.91893853320467274178;
    return half_log_2pi + (x - 0.5) * std::log(t) - t + std::log(acc);
}

}  // namespace detail

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        detail::domain_fail("log_gamma: requires finite x > 0, got x=" + std::to_string(x));
    if (x < 0.5) return detail::log_gamma_lanczos(x + 1.0) - std::log(x);
    return detail::log_gamma_lanczos(x);
}

namespace detail {

// Continued fraction for the regularized incomplete beta, evaluated with the
// modified Lentz algorithm (Numerical Recipes betacf). Converges fast for
// x < (a+1)/(a+b+2); callers switch via the symmetry relation otherwise.
inline double beta_cont_frac(double a, double b, double x) {
    constexpr double eps = 1e-15;
    constexpr double fpmin = 1e-300;
    constexpr int max_iter = 3000;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

inline void check_beta_args(double a, double b, double u, const char* who) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        domain_fail(std::string(who) + ": requires finite shape parameters a, b > 0");
    if (!(u >= 0.0 && u <= 1.0))
        domain_fail(std::string(who) + ": requires u in [0, 1], got u=" + std::to_string(u));
}

// log of the density prefactor x^a (1-x)^b / (x (1-x) B(a,b)) integrated form
inline double log_beta_prefactor(double a, double b, double x) {
    return log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) +
           b * std::log1p(-x);
}

}  // namespace detail

/// Regularized incomplete beta I_u(a,b) = P(X <= u) for X ~ Beta(a,b).
inline double beta_cdf(double a, double b, double u) {
    detail::check_beta_args(a, b, u, "beta_cdf");
    if (u == 0.0) return 0.0;
    if (u == 1.0) return 1.0;
    const double bt = std::exp(detail::log_beta_prefactor(a, b, u));
    if (u < (a + 1.0) / (a + b + 2.0)) return bt * detail::beta_cont_frac(a, b, u) / a;
    return 1.0 - bt * detail::beta_cont_frac(b, a, 1.0 - u) / b;
}

/// Upper tail P(X >= u) for X ~ Beta(a,b). Small tails are computed on the
/// direct branch of the continued fraction, so the result stays accurate in
/// relative terms (safe to take logs of).
inline double beta_tail(double a, double b, double u) {
    detail::check_beta_args(a, b, u, "beta_tail");
    if (u == 0.0) return 1.0;
    if (u == 1.0) return 0.0;
    const double bt = std::exp(detail::log_beta_prefactor(a, b, u));
    if (u < (a + 1.0) / (a + b + 2.0))
        return 1.0 - bt * detail::beta_cont_frac(a, b, u) / a;
    return bt * detail::beta_cont_frac(b, a, 1.0 - u) / b;
}

namespace detail {

// Solve w + log(w) = y, i.e. W0(e^y) for y large enough that e^y overflows.
inline double lambert_w0_of_log(double y) {
    double w = y - std::log(y);
    for (int i = 0; i < 8; ++i) {
        const double r = w + std::log(w) - y;
        const double step = r * w / (w + 1.0);
        w -= step;
        if (std::fabs(step) <= 1e-15 * w) break;
    }
    return w;
}

}  // namespace detail

/// Principal branch W0 of the Lambert W function: returns w >= -1 with
/// w * e^w = x. Domain x >= -1/e (with a 1e-15 slack for rounding).
inline double lambert_w0(double x) {
    constexpr double inv_e = 0.36787944117144233;  // 1/e
    if (std::isnan(x)) detail::domain_fail("lambert_w0: x is NaN");
    if (x < -inv_e - 1e-15)
        detail::domain_fail("lambert_w0: requires x >= -1/e, got x=" + std::to_string(x));
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return pos_inf;

    double w;
    if (x < -0.3) {
        // near the branch point: series in p = sqrt(2 (e x + 1))
        const double q = std::max(0.0, 2.0 * (std::exp(1.0) * x + 1.0));
        const double p = std::sqrt(q);
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
        if (p < 1e-5) return w;  // Halley below would divide by ~0
    } else if (x < 3.0) {
        w = x < 0.0 ? x * (1.0 - x) : std::log1p(x) * 0.7;
        if (std::fabs(x) < 1e-12) return x;  // W0(x) = x - x^2 + ...
    } else {
        const double l = std::log(x);
        w = l - std::log(l);
    }

    // Halley iteration (Corless et al. 1996)
    for (int i = 0; i < 50; ++i) {
        const double e = std::exp(w);
        const double f = w * e - x;
        const double denom = e * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        const double step = f / denom;
        w -= step;
        if (std::fabs(step) <= 1e-15 * std::max(std::fabs(w), 1e-300)) break;
    }
    return w;
}

/// Binary KL divergence kl(p||q) between Bernoulli(p) and Bernoulli(q),
/// with the conventions 0 log(0/x) = 0 and kl = +inf exactly when
/// (q = 0, p > 0) or (q = 1, p < 1).
inline double kl_binary(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
        detail::domain_fail("kl_binary: requires p, q in [0, 1]");
    double s = 0.0;
    if (p > 0.0) {
        if (q == 0.0) return pos_inf;
        s += p * std::log(p / q);
    }
    if (p < 1.0) {
        if (q == 1.0) return pos_inf;
        s += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
    }
    return s;
}

/// KL divergence between two discrete distributions on the same support;
/// +inf exactly when absolute continuity fails (some p_i > 0 = q_i).
inline double kl_discrete(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size())
        detail::domain_fail("kl_discrete: length mismatch");
    if (p.empty()) detail::domain_fail("kl_discrete: empty distributions");
    double sp = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0.0) || !(q[i] >= 0.0))
            detail::domain_fail("kl_discrete: negative or NaN component");
        sp += p[i];
        sq += q[i];
    }
    if (std::fabs(sp - 1.0) > 1e-12 || std::fabs(sq - 1.0) > 1e-12)
        detail::domain_fail("kl_discrete: inputs must sum to 1 within 1e-12");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) return pos_inf;
        s += p[i] * std::log(p[i] / q[i]);
    }
    // rounding can leave a tiny negative for p ~ q
    return s < 0.0 && s > -1e-15 ? 0.0 : s;
}

}  // namespace klbounds
