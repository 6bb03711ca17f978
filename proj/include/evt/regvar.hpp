#pragma once

// Regular variation toolkit: index estimation from ratio probes, the Karamata
// functionals b(x) and B(x), de Haan's g(x), pi-variation ratios and the
// uniform-ratio diagnostic for slowly varying functions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "evt/error.hpp"
#include "evt/limits.hpp"
#include "evt/quadrature.hpp"

namespace evt {

using RealFunction = std::function<double(double)>;

struct RvProbe {
    RealFunction fn;
    std::vector<double> x_grid;
    std::vector<double> multipliers{2.0, 5.0, 10.0};
};

struct RvFit {
    double rho_est = 0.0;
    /// (multiplier, log(U(lx)/U(x)) / log l) at the largest abscissa.
    std::vector<std::pair<double, double>> per_multiplier;
    double dispersion = 0.0;
    /// (x, median estimate at x) along the sorted grid.
    std::vector<std::pair<double, double>> trace;
    bool stabilized = false;
};

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double positive_log(const RealFunction& fn, double x) {
    const double v = fn(x);
    if (!(v > 0.0)) throw NonpositiveValue("function is not positive at x = " + std::to_string(x));
    return std::log(v);
}

}  // namespace detail

/// Estimates rho in U(l x)/U(x) -> l^rho. At every abscissa each multiplier
/// gives log(U(l x)/U(x))/log l; the median over multipliers at the largest
/// abscissa is the estimate and the trace over x feeds the stabilization flag.
inline RvFit rv_index(const RvProbe& probe, double rel_tol = 1e-3) {
    if (probe.x_grid.empty() || probe.multipliers.empty()) throw InvalidParameter("rv_index: empty probe");
    for (double m : probe.multipliers)
        if (!(m > 0.0) || m == 1.0) throw InvalidParameter("rv_index: multipliers must be positive and != 1");
    for (double x : probe.x_grid)
        if (!(x > 0.0)) throw InvalidParameter("rv_index: abscissae must be positive");

    auto grid = probe.x_grid;
    std::sort(grid.begin(), grid.end());
    RvFit fit;
    std::vector<double> last;
    for (double x : grid) {
        const double base = detail::positive_log(probe.fn, x);
        last.clear();
        for (double m : probe.multipliers)
            last.push_back((detail::positive_log(probe.fn, m * x) - base) / std::log(m));
        fit.trace.emplace_back(x, detail::median(last));
    }
    for (std::size_t i = 0; i < probe.multipliers.size(); ++i) fit.per_multiplier.emplace_back(probe.multipliers[i], last[i]);
    const auto [lo, hi] = std::minmax_element(last.begin(), last.end());
    fit.dispersion = *hi - *lo;
    fit.rho_est = fit.trace.back().second;
    std::vector<double> medians;
    for (const auto& p : fit.trace) medians.push_back(p.second);
    fit.stabilized = stabilized_limit(medians, rel_tol).stabilized;
    return fit;
}

/// b(x) = x U(x) / int_0^x U. Tends to rho + 1 for U in RV(rho), rho >= -1.
/// Computed as 1 / int_0^1 U(x v)/U(x) dv so the integral is of order one.
inline double karamata_b(const RealFunction& U, double x, const QuadratureOptions& opts = {}) {
    if (!(x > 0.0)) throw DomainError("karamata_b: x must be positive");
    const double ux = U(x);
    if (!(ux > 0.0)) throw NonpositiveValue("karamata_b: U(x) must be positive");
    const double integral = integrate([&](double v) { return U(x * v) / ux; }, 0.0, 1.0, opts);
    return 1.0 / integral;
}

/// B(x) = x U(x) / int_x^inf U. Tends to -(rho + 1) for U in RV(rho), rho < -1.
///
/// Written as 1 / int_0^inf e^v U(x e^v)/U(x) dv, v = s/(1-s): for U in RV(rho)
/// the integrand decays like e^{(rho+1) v}, so slow tails such as rho = -1.5
/// stay smooth. The tail is accepted only if t U(t) has dropped by at least 1%
/// between x and cutoff * x.
inline double karamata_B(const RealFunction& U, double x, double cutoff = 1e6, const QuadratureOptions& opts = {}) {
    if (!(x > 0.0)) throw DomainError("karamata_B: x must be positive");
    if (!(cutoff > 1.0)) throw InvalidParameter("karamata_B: cutoff must exceed 1");
    const double ux = U(x);
    if (!(ux > 0.0)) throw NonpositiveValue("karamata_B: U(x) must be positive");
    if (!(cutoff * U(cutoff * x) <= 0.99 * ux))
        throw DivergenceError("karamata_B: t U(t) does not decay; tail integral diverges");
    const double integral = integrate_upper_tail(
        [&](double v) {
            const double w = std::exp(v);
            const double t = x * w;
            return std::isfinite(t) ? w * U(t) / ux : 0.0;
        },
        0.0, 1.0, opts);
    return 1.0 / integral;
}

/// g(x) = U(x) - (1/x) int_1^x U(t) dt; slowly varying when U is pi-varying.
inline double dehaan_g(const RealFunction& U, double x, const QuadratureOptions& opts = {}) {
    if (!(x > 1.0)) throw DomainError("dehaan_g: x must exceed 1");
    return U(x) - integrate(U, 1.0, x, opts) / x;
}

/// (U(t y) - U(t)) / (U(t x) - U(t)); tends to log y / log x under pi-variation.
inline double pi_variation_ratio(const RealFunction& U, double t, double x, double y) {
    if (!(x > 0.0 && y > 0.0) || x == 1.0) throw DomainError("pi_variation_ratio: need x, y > 0 and x != 1");
    const double ut = U(t);
    const double den = U(t * x) - ut;
    if (!(std::abs(den) >= 1e-14 * std::abs(ut)) || den == 0.0)
        throw DegenerateError("pi_variation_ratio: U(tx) == U(t) at t = " + std::to_string(t));
    return (U(t * y) - ut) / den;
}

struct PiSweep {
    Series ratios;
    double target = 0.0;  // log y / log x
    bool converged = false;
};

/// Evaluates the pi-variation ratio along increasing t and reports whether it
/// settles on log y / log x.
inline PiSweep pi_variation_sweep(const RealFunction& U, std::vector<double> t_grid, double x, double y,
                                  double rel_tol = 1e-3) {
    std::sort(t_grid.begin(), t_grid.end());
    PiSweep out;
    out.target = std::log(y) / std::log(x);
    for (double t : t_grid) out.ratios.points.emplace_back(t, pi_variation_ratio(U, t, x, y));
    out.ratios.finish(rel_tol);
    out.converged = out.ratios.limit.stabilized &&
                    std::abs(out.ratios.limit.value - out.target) <= rel_tol * std::max(1.0, std::abs(out.target));
    return out;
}

/// max over u, v in a grid on [lo, hi] of |S(u)/S(v) - 1|, i.e. max/min - 1.
/// Small values on shrinking windows indicate slow variation.
inline double sv_uniform_ratio(const RealFunction& S, double lo, double hi, std::size_t grid_size) {
    if (!(lo > 0.0 && hi >= lo)) throw DomainError("sv_uniform_ratio: need 0 < lo <= hi");
    if (grid_size == 0) throw InvalidParameter("sv_uniform_ratio: grid_size must be positive");
    double smin = std::numeric_limits<double>::infinity(), smax = 0.0;
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double u = grid_size == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_size - 1);
        const double s = S(u);
        if (!(s > 0.0)) throw NonpositiveValue("sv_uniform_ratio: S must be positive on [lo, hi]");
        smin = std::min(smin, s);
        smax = std::max(smax, s);
    }
    return smax / smin - 1.0;
}

}  // namespace evt
