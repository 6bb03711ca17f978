#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature with interval halving,
// plus the s/(1-s) map for integrals over [a, +inf).

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "evt/error.hpp"

namespace evt {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    std::size_t max_intervals = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t intervals = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod15(F& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, 15> fx{};
    for (std::size_t i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[i];
        fx[2 * i] = f(centre - dx);
        fx[2 * i + 1] = f(centre + dx);
    }
    fx[14] = f(centre);
    for (double v : fx) {
        if (!std::isfinite(v)) {
            throw QuadratureFailure("non-finite integrand value on [" + std::to_string(a) + ", " +
                                    std::to_string(b) + "]");
        }
    }

    double kronrod = kKronrodWeights[7] * fx[14];
    double gauss = kGaussWeights[3] * fx[14];
    for (std::size_t i = 0; i < 7; ++i) {
        const double pair = fx[2 * i] + fx[2 * i + 1];
        kronrod += kKronrodWeights[i] * pair;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
    }
    const double mean = 0.5 * kronrod;
    double resasc = kKronrodWeights[7] * std::abs(fx[14] - mean);
    double resabs = kKronrodWeights[7] * std::abs(fx[14]);
    for (std::size_t i = 0; i < 7; ++i) {
        resasc += kKronrodWeights[i] * (std::abs(fx[2 * i] - mean) + std::abs(fx[2 * i + 1] - mean));
        resabs += kKronrodWeights[i] * (std::abs(fx[2 * i]) + std::abs(fx[2 * i + 1]));
    }
    const double scale = std::abs(half);
    resasc *= scale;
    resabs *= scale;

    // QUADPACK error heuristic.
    double err = std::abs((kronrod - gauss) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
    return {a, b, kronrod * half, err};
}

}  // namespace detail

/// Integrates f over the finite interval [a, b]. The worst segment is halved
/// until the summed error estimate meets max(abs_tol, rel_tol*|value|).
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
    if (a == b) return {};
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate_adaptive: bounds must be finite");
    const double sign = a < b ? 1.0 : -1.0;
    if (b < a) std::swap(a, b);

    std::priority_queue<detail::Segment> open;
    double settled_value = 0.0;
    double settled_error = 0.0;
    auto first = detail::gauss_kronrod15(f, a, b);
    double total = first.value;
    double error = first.error;
    open.push(first);
    std::size_t intervals = 1;

    auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
    while (error > tolerance()) {
        if (open.empty()) break;
        if (intervals >= opts.max_intervals) {
            throw QuadratureFailure("adaptive quadrature did not converge within " +
                                    std::to_string(opts.max_intervals) + " intervals (error " +
                                    std::to_string(error) + ")");
        }
        const auto worst = open.top();
        open.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Segment cannot be split further in double precision.
            settled_value += worst.value;
            settled_error += worst.error;
            continue;
        }
        const auto left = detail::gauss_kronrod15(f, worst.a, mid);
        const auto right = detail::gauss_kronrod15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        open.push(left);
        open.push(right);
        ++intervals;
    }

    // Re-sum to shed the drift accumulated by incremental updates.
    double value = settled_value;
    double err = settled_error;
    while (!open.empty()) {
        value += open.top().value;
        err += open.top().error;
        open.pop();
    }
    if (err > 10.0 * std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
        throw QuadratureFailure("adaptive quadrature stalled at error " + std::to_string(err));
    }
    return {sign * value, err, intervals};
}

template <class F>
double integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
    return integrate_adaptive(f, a, b, opts).value;
}

/// Integrates f over [a, +inf) through t = a + scale*s/(1-s), s in [0, 1).
/// Non-convergence is reported as a DivergenceError.
template <class F>
double integrate_upper_tail(F&& f, double a, double scale = 1.0, const QuadratureOptions& opts = {}) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("integrate_upper_tail: scale must be positive");
    auto mapped = [&](double s) {
        const double one_minus = 1.0 - s;
        const double t = a + scale * s / one_minus;
        if (!std::isfinite(t)) return 0.0;
        return f(t) * scale / (one_minus * one_minus);
    };
    try {
        return integrate_adaptive(mapped, 0.0, 1.0, opts).value;
    } catch (const QuadratureFailure& e) {
        throw DivergenceError(std::string("tail integral does not converge: ") + e.what());
    }
}

}  // namespace evt
