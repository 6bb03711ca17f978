#pragma once

// Monte Carlo maxima laboratory: simulated block maxima, the Malmquist
// spacing identity, and sup-norm / total-variation distances between
// normalized maxima and their extreme value limit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "evt/dist.hpp"
#include "evt/domain.hpp"
#include "evt/gev.hpp"
#include "evt/norming.hpp"
#include "evt/quadrature.hpp"
#include "evt/rng.hpp"

namespace evt {

struct MaxRun {
    std::string spec_label;
    std::size_t block_size = 0;  // m
    std::size_t reps = 0;
    NormingPair norming;
    std::vector<double> normalized_maxima;  // indexed by replicate
    std::uint64_t seed = 0;
};

struct SimulationOptions {
    /// Draw U_{1,m} directly as 1 - V^{1/m} (its Beta(1, m) law) instead of
    /// taking the minimum of m uniforms.
    bool beta_minimum = false;
    unsigned threads = 1;
};

/// Maxima of m draws F^{-1}(1 - U_j), replicate r reading stream (seed, r).
/// Since F^{-1}(1 - .) is non-increasing the maximum is F^{-1}(1 - U_{1,m}),
/// so only the minimum uniform is inverted.
inline MaxRun simulate_maxima(const DistSpec& spec, std::size_t m, std::size_t reps, const NormingPair& norming,
                              std::uint64_t seed, const SimulationOptions& opts = {}) {
    if (m < 1) throw InvalidParameter("simulate_maxima: m must be positive");
    if (reps < 1) throw InvalidParameter("simulate_maxima: reps must be positive");
    if (!(norming.a > 0.0)) throw InvalidParameter("simulate_maxima: norming scale must be positive");

    MaxRun run{spec.label, m, reps, norming, std::vector<double>(reps), seed};
    auto replicate = [&](std::size_t r) {
        UniformStream stream(seed, r);
        double u_min;
        if (opts.beta_minimum) {
            u_min = -std::expm1(std::log(stream.next()) / static_cast<double>(m));
        } else {
            u_min = 1.0;
            for (std::size_t j = 0; j < m; ++j) u_min = std::min(u_min, stream.next());
        }
        run.normalized_maxima[r] = norming.normalize(upper_quantile(spec, u_min));
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(reps)));
    if (threads == 1) {
        for (std::size_t r = 0; r < reps; ++r) replicate(r);
        return run;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::size_t r = t; r < reps; r += threads) replicate(r);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return run;
}

/// As above with the norming taken from norming_sequence(spec, gamma, m).
inline MaxRun simulate_maxima(const DistSpec& spec, std::size_t m, std::size_t reps, double gamma, std::uint64_t seed,
                              const SimulationOptions& opts = {}) {
    if (m < 2) throw InvalidParameter("simulate_maxima: m must be at least 2");
    return simulate_maxima(spec, m, reps, norming_sequence(spec, gamma, m), seed, opts);
}

struct ConvergenceReport {
    double sup_distance = 0.0;
    std::vector<double> grid;
    std::vector<double> deviations;  // |H_n(x) - G(x)| (analytic) or two-sided ECDF gap (empirical)
    bool analytic = false;
    std::optional<double> tv_distance;
};

/// sup_x |ECDF(x) - cdf(x)| for a sorted sample, by the usual sweep over the
/// jump points. Also returns the per-point gaps.
template <class Cdf>
double ks_statistic(std::span<const double> sorted, Cdf&& cdf, std::vector<double>* gaps = nullptr) {
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double u = cdf(sorted[i]);
        const double gap = std::max(static_cast<double>(i + 1) / n - u, u - static_cast<double>(i) / n);
        if (gaps) gaps->push_back(gap);
        d = std::max(d, gap);
    }
    return d;
}

/// Kolmogorov-Smirnov distance between the normalized maxima and their
/// limit classic_limit(gamma) (phi_alpha, psi_beta or Lambda).
inline ConvergenceReport empirical_sup_distance(const MaxRun& run, double gamma) {
    const GevParams g = classic_limit(gamma);
    ConvergenceReport rep;
    rep.grid = run.normalized_maxima;
    std::sort(rep.grid.begin(), rep.grid.end());
    rep.sup_distance = ks_statistic(rep.grid, [&](double x) { return gev_cdf(g, x); }, &rep.deviations);
    rep.analytic = false;
    return rep;
}

/// Quantiles of classic_limit(gamma) at equally spaced levels in [0.001, 0.999].
inline std::vector<double> default_limit_grid(double gamma, std::size_t points = 1999) {
    const GevParams g = classic_limit(gamma);
    std::vector<double> grid;
    grid.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double u = 0.001 + 0.998 * static_cast<double>(i) / static_cast<double>(points - 1);
        grid.push_back(gev_quantile(g, u));
    }
    return grid;
}

/// sup over the grid of |F^n(a x + b) - H(x)|, H = classic_limit(gamma), with
/// F^n formed as exp(n log F) to avoid underflow.
inline ConvergenceReport analytic_sup_distance(const DistSpec& spec, const NormingPair& norming, double gamma,
                                               std::size_t n, std::vector<double> x_grid = {}) {
    if (x_grid.empty()) x_grid = default_limit_grid(gamma);
    const GevParams g = classic_limit(gamma);
    ConvergenceReport rep;
    rep.analytic = true;
    rep.grid = std::move(x_grid);
    for (double x : rep.grid) {
        const double log_f = log_cdf(spec, norming.denormalize(x));
        const double fn = std::isfinite(log_f) ? std::exp(static_cast<double>(n) * log_f) : 0.0;
        const double dev = std::abs(fn - gev_cdf(g, x));
        rep.deviations.push_back(dev);
        rep.sup_distance = std::max(rep.sup_distance, dev);
    }
    return rep;
}

inline ConvergenceReport analytic_sup_distance(const DistSpec& spec, double gamma, std::size_t n,
                                               std::vector<double> x_grid = {}) {
    return analytic_sup_distance(spec, norming_sequence(spec, gamma, n), gamma, n, std::move(x_grid));
}

/// Total variation (1/2) int |f_n - h| between the density of the normalized
/// maximum, f_n(x) = n a F(a x + b)^{n-1} F'(a x + b), and the density h of
/// classic_limit(gamma). The range is clipped to the 1e-9 / 1 - 1e-9 quantiles of
/// both laws and split at every finite support endpoint.
inline double scheffe_tv(const DistSpec& spec, const NormingPair& norming, double gamma, std::size_t n) {
    if (n < 1) throw InvalidParameter("scheffe_tv: n must be positive");
    const GevParams g = classic_limit(gamma);
    const double nn = static_cast<double>(n);
    constexpr double tail = 1e-9;

    auto fn = [&](double x) {
        const double y = norming.denormalize(x);
        const double f = density_at(spec, y);
        if (!(f > 0.0)) return 0.0;
        const double log_f = log_cdf(spec, y);
        if (!std::isfinite(log_f)) return 0.0;
        return nn * norming.a * std::exp((nn - 1.0) * log_f) * f;
    };
    auto integrand = [&](double x) { return std::abs(fn(x) - gev_pdf(g, x)); };

    // Quantiles of the normalized maximum: F^{-1}(u^{1/n}).
    const double max_lo = norming.normalize(generalized_inverse(spec, std::exp(std::log(tail) / nn)));
    const double max_hi = norming.normalize(upper_quantile(spec, -std::expm1(std::log1p(-tail) / nn)));
    const double lo = std::min(gev_quantile(g, tail), max_lo);
    const double hi = std::max(gev_upper_quantile(g, tail), max_hi);

    std::vector<double> cuts{lo, hi};
    for (double e : {g.lower_endpoint(), g.upper_endpoint(), norming.normalize(spec.lep), norming.normalize(spec.uep)})
        if (std::isfinite(e) && e > lo && e < hi) cuts.push_back(e);
    std::sort(cuts.begin(), cuts.end());

    QuadratureOptions opts;
    opts.abs_tol = 1e-11;
    opts.rel_tol = 1e-9;
    opts.max_intervals = 20000;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += integrate(integrand, cuts[i], cuts[i + 1], opts);
    return std::clamp(0.5 * total, 0.0, 1.0);
}

inline double scheffe_tv(const DistSpec& spec, double gamma, std::size_t n) {
    if (n < 2) throw InvalidParameter("scheffe_tv: n must be at least 2");
    return scheffe_tv(spec, norming_sequence(spec, gamma, n), gamma, n);
}

struct MalmquistResult {
    std::size_t n = 0;
    std::vector<double> spacings;  // j log(U_{j+1,n} / U_{j,n}), j = 1..n
    double ks_statistic = 0.0;
    double threshold = 0.0;        // 1.36 / sqrt(n)
    std::optional<bool> pass;      // unset for n < 50, where the asymptotic level is unreliable
};

/// Malmquist transform of a uniform sample: with U_{1,n} <= ... <= U_{n,n}
/// and U_{n+1,n} = 1, the values j log(U_{j+1,n}/U_{j,n}) are i.i.d. Exp(1).
/// Runs a one-sample KS test of the spacings against the exponential cdf.
inline MalmquistResult malmquist_from_uniforms(std::vector<double> u) {
    if (u.empty()) throw InvalidParameter("malmquist: need at least one uniform");
    std::sort(u.begin(), u.end());
    MalmquistResult res;
    res.n = u.size();
    res.spacings.reserve(res.n);
    for (std::size_t j = 1; j <= res.n; ++j) {
        const double next = j < res.n ? u[j] : 1.0;
        res.spacings.push_back(static_cast<double>(j) * std::log(next / u[j - 1]));
    }
    auto sorted = res.spacings;
    std::sort(sorted.begin(), sorted.end());
    res.ks_statistic = ks_statistic(sorted, [](double s) { return s <= 0.0 ? 0.0 : -std::expm1(-s); });
    res.threshold = 1.36 / std::sqrt(static_cast<double>(res.n));
    if (res.n >= 50) res.pass = res.ks_statistic <= res.threshold;
    return res;
}

inline MalmquistResult malmquist_spacings(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw InvalidParameter("malmquist_spacings: n must be at least 1");
    UniformStream stream(seed, 0);
    std::vector<double> u(n);
    for (auto& v : u) v = stream.next();
    return malmquist_from_uniforms(std::move(u));
}

}  // namespace evt
