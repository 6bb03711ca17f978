#pragma once

// The unified extreme value family G_gamma(x) = exp(-(1 + gamma x)^{-1/gamma}),
// its three classical types and the affine "convergence in type" algebra.

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "evt/error.hpp"
#include "evt/limits.hpp"
#include "evt/norming.hpp"

namespace evt {

struct GevParams {
    double gamma = 0.0;
    double loc = 0.0;
    double scale = 1.0;

    void validate() const {
        if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidParameter("GEV scale must be positive");
        if (!std::isfinite(gamma) || !std::isfinite(loc)) throw InvalidParameter("GEV parameters must be finite");
    }

    double lower_endpoint() const {
        return gamma > 0.0 ? loc - scale / gamma : -std::numeric_limits<double>::infinity();
    }
    double upper_endpoint() const {
        return gamma < 0.0 ? loc - scale / gamma : std::numeric_limits<double>::infinity();
    }
};

namespace detail {

// Below this |gamma z| the Gumbel form exp(-z) replaces (1 + gamma z)^{-1/gamma}.
inline constexpr double kGumbelSwitch = 1e-9;

// log of (1 + gamma z)^{-1/gamma}; requires 1 + gamma z > 0.
inline double gev_log_tail(double gamma, double z) {
    if (gamma == 0.0 || std::abs(gamma * z) < kGumbelSwitch) return -z;
    return -std::log1p(gamma * z) / gamma;
}

enum class Region { below, inside, above };

inline Region gev_region(const GevParams& p, double z) {
    if (std::isinf(z)) return z > 0 ? Region::above : Region::below;
    if (p.gamma == 0.0) return Region::inside;
    if (1.0 + p.gamma * z > 0.0) return Region::inside;
    return p.gamma > 0.0 ? Region::below : Region::above;
}

}  // namespace detail

/// G_gamma((x - loc) / scale). Exactly 1 at and above a finite upper endpoint.
inline double gev_cdf(const GevParams& p, double x) {
    p.validate();
    const double z = (x - p.loc) / p.scale;
    switch (detail::gev_region(p, z)) {
        case detail::Region::below: return 0.0;
        case detail::Region::above: return 1.0;
        case detail::Region::inside: break;
    }
    return std::exp(-std::exp(detail::gev_log_tail(p.gamma, z)));
}

/// 1 - G, without cancellation in the upper tail.
inline double gev_sf(const GevParams& p, double x) {
    p.validate();
    const double z = (x - p.loc) / p.scale;
    switch (detail::gev_region(p, z)) {
        case detail::Region::below: return 1.0;
        case detail::Region::above: return 0.0;
        case detail::Region::inside: break;
    }
    return -std::expm1(-std::exp(detail::gev_log_tail(p.gamma, z)));
}

inline double gev_pdf(const GevParams& p, double x) {
    p.validate();
    const double z = (x - p.loc) / p.scale;
    if (detail::gev_region(p, z) != detail::Region::inside) return 0.0;
    const double lt = detail::gev_log_tail(p.gamma, z);
    return std::exp(-std::exp(lt) + (1.0 + p.gamma) * lt) / p.scale;
}

/// d/dx of gev_pdf: g(x) (e^{lt} - (1 + gamma)) / ((1 + gamma z) scale).
inline double gev_pdf_derivative(const GevParams& p, double x) {
    p.validate();
    const double z = (x - p.loc) / p.scale;
    if (detail::gev_region(p, z) != detail::Region::inside) return 0.0;
    const double lt = detail::gev_log_tail(p.gamma, z);
    const double t = p.gamma == 0.0 ? 1.0 : 1.0 + p.gamma * z;
    const double g = std::exp(-std::exp(lt) + (1.0 + p.gamma) * lt) / p.scale;
    return g * (std::exp(lt) - (1.0 + p.gamma)) / (t * p.scale);
}

namespace detail {

// x such that (1 + gamma z)^{-1/gamma} = w.
inline double gev_from_tail(const GevParams& p, double w) {
    if (p.gamma == 0.0) return p.loc - p.scale * std::log(w);
    return p.loc + p.scale * std::expm1(-p.gamma * std::log(w)) / p.gamma;
}

}  // namespace detail

inline double gev_quantile(const GevParams& p, double u) {
    p.validate();
    if (!(u > 0.0 && u < 1.0)) throw DomainError("gev_quantile: u must lie in (0, 1)");
    return detail::gev_from_tail(p, -std::log(u));
}

/// G^{-1}(1 - s), accurate for tiny s.
inline double gev_upper_quantile(const GevParams& p, double s) {
    p.validate();
    if (!(s > 0.0 && s < 1.0)) throw DomainError("gev_upper_quantile: s must lie in (0, 1)");
    return detail::gev_from_tail(p, -std::log1p(-s));
}

// ---------------------------------------------------------------------------
// Classical types

inline double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

/// phi_alpha(x) = exp(-x^{-alpha}) for x > 0, 0 otherwise.
inline double frechet_cdf(double alpha, double x) { return x > 0.0 ? std::exp(-std::pow(x, -alpha)) : 0.0; }

/// psi_beta(x) = exp(-(-x)^beta) for x < 0, 1 otherwise.
inline double weibull_cdf(double beta, double x) { return x < 0.0 ? std::exp(-std::pow(-x, beta)) : 1.0; }

/// H_2(x) = H_1(A x + B).
struct TypeRelation {
    double A = 1.0;
    double B = 0.0;

    double apply(double x) const { return A * x + B; }
    TypeRelation inverse() const { return {1.0 / A, -B / A}; }
    /// (*this) after `inner`: x -> A (inner.A x + inner.B) + B.
    TypeRelation compose(const TypeRelation& inner) const { return {A * inner.A, A * inner.B + B}; }
};

enum class ClassicType { frechet, weibull, gumbel };

inline const char* to_string(ClassicType t) {
    switch (t) {
        case ClassicType::frechet: return "frechet";
        case ClassicType::weibull: return "weibull";
        case ClassicType::gumbel: return "gumbel";
    }
    return "?";
}

/// A classical extreme value law together with the affine map relating it
/// to G_gamma: G_gamma(x) = classic(relation.apply(x)).
struct ClassicForm {
    ClassicType type = ClassicType::gumbel;
    double index = 0.0;  // alpha for Frechet, beta for Weibull, unused for Gumbel
    TypeRelation relation;

    double cdf(double y) const {
        switch (type) {
            case ClassicType::frechet: return frechet_cdf(index, y);
            case ClassicType::weibull: return weibull_cdf(index, y);
            case ClassicType::gumbel: return gumbel_cdf(y);
        }
        return 0.0;
    }
};

inline ClassicForm classic_from_gev(double gamma) {
    if (gamma > 0.0) return {ClassicType::frechet, 1.0 / gamma, {gamma, 1.0}};
    if (gamma < 0.0) return {ClassicType::weibull, -1.0 / gamma, {-gamma, -1.0}};
    return {ClassicType::gumbel, 0.0, {1.0, 0.0}};
}

/// The classical law of shape gamma as a location-scale GEV, classic(y) =
/// G_gamma((y - B) / A): phi_{1/gamma}, psi_{-1/gamma} or Lambda. These are the
/// limits reached with the norming pairs of norming_sequence.
inline GevParams classic_limit(double gamma) {
    const auto form = classic_from_gev(gamma);
    return {gamma, form.relation.B, form.relation.A};
}

/// Recovers (A, B) with G(x) = H(A x + B) from two quantile levels of each law.
/// Since G^{-1}(u) = (H^{-1}(u) - B) / A, two levels determine both parameters.
inline TypeRelation type_params_from_quantiles(const std::function<double(double)>& h_inv,
                                               const std::function<double(double)>& g_inv, double u1, double u2) {
    if (!(0.0 < u1 && u1 < u2 && u2 < 1.0)) throw DomainError("type_params_from_quantiles: need 0 < u1 < u2 < 1");
    const double h1 = h_inv(u1), h2 = h_inv(u2);
    const double g1 = g_inv(u1), g2 = g_inv(u2);
    if (h2 == h1) throw DegenerateError("type_params_from_quantiles: h_inv(u1) == h_inv(u2)");
    if (g2 == g1) throw DegenerateError("type_params_from_quantiles: g_inv(u1) == g_inv(u2)");
    const double A = (h2 - h1) / (g2 - g1);
    if (!(A > 0.0)) throw DegenerateError("type_params_from_quantiles: quantile functions are not co-monotone");
    return {A, h1 - A * g1};
}

struct NormingLimit {
    double A = 1.0;
    double B = 0.0;
    bool stabilized = false;
    std::vector<double> ratio_trace;  // alpha_n / a_n
    std::vector<double> shift_trace;  // (beta_n - b_n) / a_n
};

/// Compares two norming sequences (a_n, b_n) and (alpha_n, beta_n) along a
/// common grid of n; when both normalize to limits of the same type the
/// ratios alpha_n/a_n and (beta_n - b_n)/a_n converge to the type parameters.
inline NormingLimit norming_limit_check(std::span<const NormingPair> an_bn, std::span<const NormingPair> alt,
                                        double rel_tol = 1e-3) {
    if (an_bn.size() != alt.size() || an_bn.empty())
        throw InvalidParameter("norming_limit_check: sequences must be non-empty and of equal length");
    NormingLimit out;
    for (std::size_t i = 0; i < an_bn.size(); ++i) {
        if (an_bn[i].n != alt[i].n) throw InvalidParameter("norming_limit_check: sequences use different n grids");
        if (!(an_bn[i].a > 0.0) || !(alt[i].a > 0.0)) throw InvalidParameter("norming_limit_check: a_n must be positive");
        out.ratio_trace.push_back(alt[i].a / an_bn[i].a);
        out.shift_trace.push_back((alt[i].b - an_bn[i].b) / an_bn[i].a);
    }
    const auto ratio = stabilized_limit(out.ratio_trace, rel_tol);
    const auto shift = stabilized_limit(out.shift_trace, rel_tol);
    out.A = ratio.value;
    out.B = shift.value;
    out.stabilized = ratio.stabilized && shift.stabilized;
    return out;
}

}  // namespace evt
