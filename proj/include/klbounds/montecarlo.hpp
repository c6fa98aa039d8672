#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "klbounds/dirichlet_bounds.hpp"
#include "klbounds/rng.hpp"
#include "klbounds/special_functions.hpp"

// Seeded sampling-based ground truth: Dirichlet tail estimation with exact
// Clopper-Pearson intervals, plus the empirical checks (superadditivity of
// the log deviation, the Dirichlet-Multinomial correspondence) that certify
// the structural properties behind the perturbed bounds.

namespace klbounds {

/// Monte Carlo point estimate with an exact binomial confidence interval.
struct TailEstimate {
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    long long n_samples = 0;
    long long n_hits = 0;
    std::uint64_t seed = 0;
    double confidence = 0.0;
    long long n_resamples = 0;  // all-zero Gamma draws that were redrawn
};

/// Quantile of Beta(a, b) by bisection on the regularized incomplete beta.
inline double beta_quantile(double p, double a, double b) {
    if (!(p >= 0.0 && p <= 1.0)) detail::domain_fail("beta_quantile: requires p in [0,1]");
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (beta_cdf(a, b, mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Exact (Clopper-Pearson) two-sided binomial interval.
struct BinomialInterval {
    double low;
    double high;
};

inline BinomialInterval clopper_pearson(long long hits, long long n, double confidence) {
    if (n <= 0 || hits < 0 || hits > n)
        detail::domain_fail("clopper_pearson: requires 0 <= hits <= n, n >= 1");
    if (!(confidence > 0.0 && confidence < 1.0))
        detail::domain_fail("clopper_pearson: requires confidence in (0,1)");
    const double half_alpha = 0.5 * (1.0 - confidence);
    const double h = static_cast<double>(hits), m = static_cast<double>(n);
    BinomialInterval ci{0.0, 1.0};
    if (hits > 0) ci.low = beta_quantile(half_alpha, h, m - h + 1.0);
    if (hits < n) ci.high = beta_quantile(1.0 - half_alpha, h + 1.0, m - h);
    return ci;
}

/// One unit-scale Gamma(shape) variate; Marsaglia-Tsang squeeze for
/// shape >= 1, boosted by Gamma(k) = Gamma(k+1) U^(1/k) below 1.
inline double sample_gamma(double shape, Rng& rng) {
    if (!(shape > 0.0)) detail::domain_fail("sample_gamma: requires shape > 0");
    double boost = 1.0;
    if (shape < 1.0) {
        boost = std::pow(rng.uniform01_open(), 1.0 / shape);
        shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double uu = rng.uniform01_open();
        if (uu < 1.0 - 0.0331 * x * x * x * x) return boost * d * v;
        if (std::log(uu) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return boost * d * v;
    }
}

namespace detail {

// One normalized sample of independent Gamma(masses_i) variates; components
// with zero mass are pinned to exactly 0 (degenerate Dirichlet components).
// Returns false when every Gamma draw underflowed to zero.
inline bool sample_dirichlet_raw(std::span<const double> masses, Rng& rng,
                                 std::span<double> out) {
    double total = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        out[i] = masses[i] > 0.0 ? sample_gamma(masses[i], rng) : 0.0;
        total += out[i];
    }
    if (total <= 0.0) return false;
    for (auto& x : out) x /= total;
    return true;
}

// Block-based estimator: sample index space is cut into fixed blocks, block
// b consumes the stream (seed, b), and hit counts are summed. The estimate
// is a pure function of (masses, predicate, n, seed) independent of how
// blocks are assigned to workers.
template <class Pred>
inline TailEstimate estimate_event(std::span<const double> masses, Pred&& predicate,
                                   long long n, std::uint64_t seed, double confidence,
                                   int workers) {
    if (n < 1) domain_fail("estimate_event: requires n >= 1");
    double mass_total = 0.0;
    for (double m : masses) {
        if (!(m >= 0.0)) domain_fail("estimate_event: masses must be >= 0");
        mass_total += m;
    }
    if (!(mass_total > 0.0)) domain_fail("estimate_event: total mass must be positive");

    constexpr long long block_size = 1 << 16;
    const long long n_blocks = (n + block_size - 1) / block_size;
    const int nw = workers > 0 ? workers
                               : std::max(1u, std::thread::hardware_concurrency());

    std::atomic<long long> next_block{0};
    std::atomic<long long> hits{0}, resamples{0};
    auto run = [&] {
        std::vector<double> x(masses.size());
        long long local_hits = 0, local_resamples = 0;
        while (true) {
            const long long b = next_block.fetch_add(1);
            if (b >= n_blocks) break;
            Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(b));
            const long long count = std::min(block_size, n - b * block_size);
            for (long long i = 0; i < count; ++i) {
                while (!sample_dirichlet_raw(masses, rng, x)) ++local_resamples;
                if (predicate(x)) ++local_hits;
            }
        }
        hits += local_hits;
        resamples += local_resamples;
    };
    if (nw == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nw);
        for (int i = 0; i < nw; ++i) pool.emplace_back(run);
        for (auto& th : pool) th.join();
    }

    TailEstimate est;
    est.n_samples = n;
    est.n_hits = hits.load();
    est.n_resamples = resamples.load();
    est.seed = seed;
    est.confidence = confidence;
    est.p_hat = static_cast<double>(est.n_hits) / static_cast<double>(n);
    const auto ci = clopper_pearson(est.n_hits, n, confidence);
    est.ci_low = ci.low;
    est.ci_high = ci.high;
    return est;
}

inline std::uint64_t subseed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t s = seed + 0x632be59bd9b4e019ULL * (tag + 1);
    return splitmix64(s);
}

}  // namespace detail

/// One draw X ~ Dir(alpha * nu0) via normalized Gamma variates.
inline std::vector<double> sample_dirichlet(const DirichletParams& d, Rng& rng) {
    std::vector<double> masses(d.base.d());
    for (std::size_t i = 0; i < masses.size(); ++i)
        masses[i] = d.alpha * d.base.weights[i];
    std::vector<double> x(masses.size());
    while (!detail::sample_dirichlet_raw(masses, rng, x)) {
    }
    return x;
}

/// Estimate P(sum_i X_i f_i >= u) for X ~ Dir(masses) given as a raw
/// non-negative measure over the atoms.
inline TailEstimate estimate_tail_measure(std::span<const double> masses,
                                          std::span<const double> payoffs, double u,
                                          long long n, std::uint64_t seed,
                                          double confidence = 0.999, int workers = 1) {
    if (masses.size() != payoffs.size())
        detail::domain_fail("estimate_tail_measure: masses/payoffs length mismatch");
    return detail::estimate_event(
        masses,
        [payoffs, u](const std::vector<double>& x) {
            double e = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) e += x[i] * payoffs[i];
            return e >= u;
        },
        n, seed, confidence, workers);
}

/// Estimate P(E_X[f] >= u) for X ~ Dir(alpha * nu0).
inline TailEstimate estimate_tail(const DirichletParams& d, double u, long long n,
                                  std::uint64_t seed, double confidence = 0.999,
                                  int workers = 1) {
    std::vector<double> masses(d.base.d());
    for (std::size_t i = 0; i < masses.size(); ++i)
        masses[i] = d.alpha * d.base.weights[i];
    return estimate_tail_measure(masses, d.base.payoffs, u, n, seed, confidence, workers);
}

/// Exact log-tail for the d = 2 reduction: X_1 v + X_2 w >= u with
/// X_1 ~ Beta(m_1, m_2) collapses to a Beta tail at a transformed threshold.
inline double exact_log_tail_d2(std::span<const double> masses,
                                std::span<const double> payoffs, double u) {
    if (masses.size() != 2 || payoffs.size() != 2)
        detail::domain_fail("exact_log_tail_d2: requires exactly 2 atoms");
    const double v = payoffs[0], w = payoffs[1];
    if (v == w) return u <= v ? 0.0 : -pos_inf;
    // orient so the first payoff is the larger one
    if (v < w) {
        const double m[2] = {masses[1], masses[0]};
        const double f[2] = {payoffs[1], payoffs[0]};
        return exact_log_tail_d2({m, 2}, {f, 2}, u);
    }
    const double threshold = (u - w) / (v - w);
    if (threshold <= 0.0) return 0.0;
    if (threshold > 1.0) return -pos_inf;
    return std::log(beta_tail(masses[0], masses[1], threshold));
}

enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

/// Outcome of one empirical property check, with the estimates it used.
struct VerdictRecord {
    std::string name;
    Verdict verdict = Verdict::inconclusive;
    std::vector<TailEstimate> estimates;
    std::vector<std::pair<std::string, double>> detail;
};

namespace detail {

// shared verdict logic: superadditivity h(s+t) >= h(s) + h(t) checked with
// one-sided CI slack; a confident violation requires the whole upper CI of
// the (s+t) estimate to fall below the product of the lower CIs
inline VerdictRecord superadditivity_verdict(std::string name, const TailEstimate& es,
                                             const TailEstimate& et,
                                             const TailEstimate& est_sum) {
    VerdictRecord rec;
    rec.name = std::move(name);
    rec.estimates = {es, et, est_sum};
    if (es.n_hits == 0 || et.n_hits == 0 || est_sum.n_hits == 0) {
        rec.verdict = Verdict::inconclusive;
        return rec;
    }
    const double lhs = std::log(est_sum.ci_high);
    const double rhs = std::log(es.ci_low) + std::log(et.ci_low);
    rec.verdict = lhs >= rhs ? Verdict::pass : Verdict::fail;
    rec.detail = {{"margin", lhs - rhs}};
    return rec;
}

}  // namespace detail

/// Empirical superadditivity of t -> log P_{Dir(t nu + eta)}(E_X[f] >= u):
/// estimates at scales s, t and s + t must satisfy h(s+t) >= h(s) + h(t)
/// within the combined CI slack.
inline VerdictRecord check_superadditivity_halfspace(const FiniteSupport& nu,
                                                     const Perturbation& eta, double u,
                                                     double s, double t, long long n,
                                                     std::uint64_t seed,
                                                     double confidence = 0.999,
                                                     int workers = 1) {
    if (!(s > 0.0) || !(t > 0.0))
        detail::domain_fail("check_superadditivity_halfspace: requires s, t > 0");
    if (eta.masses.size() != nu.d())
        detail::domain_fail("check_superadditivity_halfspace: eta size mismatch");
    if (eta.total > 1.0 + 1e-12)
        detail::domain_fail("check_superadditivity_halfspace: requires eta total <= 1");

    auto masses_at = [&](double scale) {
        std::vector<double> m(nu.d());
        for (std::size_t i = 0; i < m.size(); ++i)
            m[i] = scale * nu.weights[i] + eta.masses[i];
        return m;
    };
    const auto ms = masses_at(s), mt = masses_at(t), msum = masses_at(s + t);
    const auto es = estimate_tail_measure(ms, nu.payoffs, u, n, detail::subseed(seed, 1),
                                          confidence, workers);
    const auto et = estimate_tail_measure(mt, nu.payoffs, u, n, detail::subseed(seed, 2),
                                          confidence, workers);
    const auto esum = estimate_tail_measure(msum, nu.payoffs, u, n,
                                            detail::subseed(seed, 3), confidence, workers);
    return detail::superadditivity_verdict("superadditivity-halfspace", es, et, esum);
}

/// Same check for the convex set C_p = {q : all tail sums of q dominate
/// those of p}, with a unit point mass at atom x_atom as the perturbation.
inline VerdictRecord check_superadditivity_convex(std::span<const double> nu_weights,
                                                  std::span<const double> p_ref,
                                                  std::size_t x_atom, double s, double t,
                                                  long long n, std::uint64_t seed,
                                                  double confidence = 0.999,
                                                  int workers = 1) {
    const std::size_t d = nu_weights.size();
    if (d < 2 || p_ref.size() != d)
        detail::domain_fail("check_superadditivity_convex: requires d >= 2 matching vectors");
    if (x_atom >= d) detail::domain_fail("check_superadditivity_convex: bad atom index");
    if (!(s > 0.0) || !(t > 0.0))
        detail::domain_fail("check_superadditivity_convex: requires s, t > 0");

    // membership: the d-1 tail-sum inequalities
    std::vector<double> p_tail(d, 0.0);
    for (std::size_t i = d - 1; i >= 1; --i) p_tail[i - 1] = p_tail[i] + p_ref[i];
    auto in_cp = [&, p_tail](const std::vector<double>& x) {
        double tail = 0.0;
        for (std::size_t i = d - 1; i >= 1; --i) {
            tail += x[i];
            if (tail < p_tail[i - 1]) return false;
        }
        return true;
    };

    auto masses_at = [&](double scale) {
        std::vector<double> m(d);
        for (std::size_t i = 0; i < d; ++i)
            m[i] = scale * nu_weights[i] + (i == x_atom ? 1.0 : 0.0);
        return m;
    };
    const auto ms = masses_at(s), mt = masses_at(t), msum = masses_at(s + t);
    const auto es = detail::estimate_event(ms, in_cp, n, detail::subseed(seed, 1),
                                           confidence, workers);
    const auto et = detail::estimate_event(mt, in_cp, n, detail::subseed(seed, 2),
                                           confidence, workers);
    const auto esum = detail::estimate_event(msum, in_cp, n, detail::subseed(seed, 3),
                                             confidence, workers);
    return detail::superadditivity_verdict("superadditivity-convex", es, et, esum);
}

/// Exact-vs-sampled check of the Dirichlet-Multinomial correspondence:
/// with k_0 = 0 <= k_1 <= ... <= k_{d-1} <= n_trials and k_d = n_trials + 1,
///   P(all prefix sums of M ~ Mult(n_trials, p) reach the k_i)
///     = P(all tail sums of D ~ Dir((k_i - k_{i-1})_i) dominate those of p).
/// The multinomial side is enumerated exactly; the Dirichlet side is
/// estimated and must cover the exact value with its CI.
inline VerdictRecord check_dirichlet_multinomial(int n_trials, std::span<const double> p,
                                                 std::span<const int> thresholds,
                                                 long long n_mc, std::uint64_t seed,
                                                 double confidence = 0.999,
                                                 int workers = 1) {
    const std::size_t d = p.size();
    if (d < 2 || d > 4) detail::domain_fail("check_dirichlet_multinomial: requires 2 <= d <= 4");
    if (n_trials < 0 || n_trials > 8)
        detail::domain_fail("check_dirichlet_multinomial: requires 0 <= n_trials <= 8");
    if (thresholds.size() != d - 1)
        detail::domain_fail("check_dirichlet_multinomial: needs d-1 thresholds");
    double psum = 0.0;
    for (double pi : p) {
        if (!(pi >= 0.0)) detail::domain_fail("check_dirichlet_multinomial: bad probability");
        psum += pi;
    }
    if (std::fabs(psum - 1.0) > 1e-12)
        detail::domain_fail("check_dirichlet_multinomial: p must sum to 1");
    int prev = 0;
    for (int k : thresholds) {
        if (k < prev || k > n_trials)
            detail::domain_fail(
                "check_dirichlet_multinomial: thresholds must be nondecreasing in [0, n_trials]");
        prev = k;
    }

    // exact multinomial side by enumeration of all outcome vectors
    std::vector<double> log_fact(n_trials + 1, 0.0);
    for (int i = 2; i <= n_trials; ++i) log_fact[i] = log_fact[i - 1] + std::log(double(i));
    double exact = 0.0;
    std::vector<int> m(d, 0);
    auto rec = [&](auto&& self, std::size_t pos, int rem) -> void {
        if (pos + 1 == d) {
            m[pos] = rem;
            int prefix = 0;
            for (std::size_t i = 0; i + 1 < d; ++i) {
                prefix += m[i];
                if (prefix < thresholds[i]) return;
            }
            double lp = log_fact[n_trials];
            for (std::size_t i = 0; i < d; ++i) {
                if (m[i] == 0) continue;
                if (p[i] == 0.0) return;  // impossible outcome
                lp += m[i] * std::log(p[i]) - log_fact[m[i]];
            }
            exact += std::exp(lp);
            return;
        }
        for (int v = 0; v <= rem; ++v) {
            m[pos] = v;
            self(self, pos + 1, rem - v);
        }
    };
    rec(rec, 0, n_trials);
    exact = std::min(exact, 1.0);

    // Dirichlet side: shapes k_i - k_{i-1} with k_d = n_trials + 1; zero
    // shapes are degenerate components pinned at 0 by the sampler
    std::vector<double> shapes(d);
    prev = 0;
    for (std::size_t i = 0; i + 1 < d; ++i) {
        shapes[i] = thresholds[i] - prev;
        prev = thresholds[i];
    }
    shapes[d - 1] = (n_trials + 1) - prev;

    std::vector<double> p_tail(d, 0.0);
    for (std::size_t i = d - 1; i >= 1; --i) p_tail[i - 1] = p_tail[i] + p[i];
    auto event = [&, p_tail](const std::vector<double>& x) {
        double tail = 0.0;
        for (std::size_t i = d - 1; i >= 1; --i) {
            tail += x[i];
            if (tail < p_tail[i - 1]) return false;
        }
        return true;
    };
    const auto est = detail::estimate_event(shapes, event, n_mc, detail::subseed(seed, 7),
                                            confidence, workers);

    VerdictRecord recd;
    recd.name = "dirichlet-multinomial";
    recd.estimates = {est};
    recd.detail = {{"exact", exact}};
    if (est.n_hits == 0 && exact > 0.0)
        recd.verdict = Verdict::inconclusive;
    else
        recd.verdict = (exact >= est.ci_low && exact <= est.ci_high) ? Verdict::pass
                                                                     : Verdict::fail;
    return recd;
}

}  // namespace klbounds
