#pragma once

// Standard normal cdf, survival and quantile via the complementary error
// function, plus the closed-form tail bounds and quantile expansion.

#include <cmath>
#include <limits>
#include <numbers>

#include "evt/error.hpp"

namespace evt {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934381868;

inline double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

inline double normal_cdf(double x) {
    if (x == -std::numeric_limits<double>::infinity()) return 0.0;
    if (x == std::numeric_limits<double>::infinity()) return 1.0;
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

inline double normal_sf(double x) { return normal_cdf(-x); }

/// Q(1 - s): the upper s-quantile of the standard normal.
///
/// Newton iteration on log(1 - Phi(x)) = log(s). The function is concave and
/// decreasing, so starting from sqrt(2 log(1/s)) (always right of the root)
/// the iterates decrease monotonically onto the root.
inline double normal_upper_quantile(double s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("normal_upper_quantile: s must lie in (0, 1)");
    if (s > 0.5) return -normal_upper_quantile(1.0 - s);
    if (s == 0.5) return 0.0;
    if (s < std::numeric_limits<double>::min()) throw DomainError("normal_upper_quantile: s underflows");

    const double target = std::log(s);
    double x = std::sqrt(-2.0 * target);
    for (int iter = 0; iter < 200; ++iter) {
        const double tail = normal_sf(x);
        const double hazard = normal_pdf(x) / tail;
        const double step = (std::log(tail) - target) / hazard;
        x += step;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

/// Phi^{-1}(u).
inline double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("normal_quantile: u must lie in (0, 1)");
    if (u < 0.5) return -normal_upper_quantile(u);
    return normal_upper_quantile(1.0 - u);
}

struct GaussianTailBounds {
    double x = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

/// C(1/x - 1/x^2) e^{-x^2/2} <= 1 - Phi(x) <= C e^{-x^2/2} / x, C = 1/sqrt(2 pi).
/// The lower bound is looser than the classical 1/x - 1/x^3 one and is zero at x = 1.
inline GaussianTailBounds gaussian_tail_bounds(double x) {
    if (!(x > 0.0)) throw DomainError("gaussian_tail_bounds: x must be positive");
    const double kernel = kInvSqrt2Pi * std::exp(-0.5 * x * x);
    return {x, kernel * (1.0 / x - 1.0 / (x * x)), kernel / x};
}

/// Largest level accepted by gaussian_quantile_expansion, where log log(1/s) = 1.
inline const double kExpansionMaxLevel = std::exp(-std::numbers::e);

/// (2 log(1/s))^{1/2} - (log 4pi + log log(1/s)) / (2 (2 log(1/s))^{1/2}),
/// an asymptotic approximation of Phi^{-1}(1 - s) for small s.
inline double gaussian_quantile_expansion(double s) {
    if (!(s > 0.0 && s <= kExpansionMaxLevel))
        throw DomainError("gaussian_quantile_expansion: s must lie in (0, exp(-e)]");
    const double log_inv = -std::log(s);
    const double root = std::sqrt(2.0 * log_inv);
    return root - (std::log(4.0 * std::numbers::pi) + std::log(log_inv)) / (2.0 * root);
}

}  // namespace evt
