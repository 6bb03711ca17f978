#pragma once

// Distribution handles, generalized inverses, the built-in families and
// seeded sampling through the uniform representation X = F^{-1}(1 - U).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "evt/error.hpp"
#include "evt/gaussian.hpp"
#include "evt/gev.hpp"
#include "evt/rng.hpp"

namespace evt {

using RealFunction = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A probability law on the real line given by function handles.
///
/// Only `cdf` is mandatory. The optional handles supply closed forms the
/// numerical routines prefer when present; `sf`, `upper_quantile` and
/// `upper_gap` exist so that the far upper tail can be evaluated without the
/// cancellation in 1 - F(x).
struct DistSpec {
    RealFunction cdf;
    RealFunction quantile;            // u -> F^{-1}(u)
    RealFunction density;             // F'
    RealFunction density_derivative;  // F''
    RealFunction sf;                  // x -> 1 - F(x)
    RealFunction upper_quantile;      // s -> F^{-1}(1 - s)
    RealFunction upper_gap;           // s -> uep - F^{-1}(1 - s), finite uep only
    double lep = -kInf;
    double uep = kInf;
    std::string label;
};

/// F(x), exactly 0 at -inf and 1 at +inf.
inline double cdf_at(const DistSpec& spec, double x) {
    if (x == -kInf) return 0.0;
    if (x == kInf) return 1.0;
    const double v = spec.cdf(x);
    return std::clamp(v, 0.0, 1.0);
}

/// 1 - F(x), clamped to [0, 1].
inline double survival(const DistSpec& spec, double x) {
    if (x == -kInf) return 1.0;
    if (x == kInf) return 0.0;
    const double v = spec.sf ? spec.sf(x) : 1.0 - spec.cdf(x);
    return std::clamp(v, 0.0, 1.0);
}

/// log F(x), computed from the survival function when F is close to 1.
inline double log_cdf(const DistSpec& spec, double x) {
    const double s = survival(spec, x);
    if (s < 0.5) return std::log1p(-s);
    return std::log(cdf_at(spec, x));
}

struct InverseOptions {
    double tol = 1e-12;         // absolute tolerance on x
    double max_bracket = 0x1.0p64;
};

namespace detail {

/// inf{x : pred(x)} for a predicate that is false then true along the line.
template <class Pred>
double infimum_where(Pred&& pred, const InverseOptions& opts) {
    double lo = -1.0;
    double hi = 1.0;
    while (!pred(hi)) {
        hi *= 2.0;
        if (hi > opts.max_bracket) throw BracketFailure("generalized inverse: no upper bracket below 2^64");
    }
    while (pred(lo)) {
        lo *= 2.0;
        if (lo < -opts.max_bracket) throw BracketFailure("generalized inverse: no lower bracket above -2^64");
    }
    while (hi - lo > opts.tol) {
        const double mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) break;
        (pred(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace detail

/// F^{-1}(u) = inf{x : F(x) >= u}. Uses the closed-form quantile when the
/// spec carries one, otherwise brackets and bisects on the cdf.
inline double generalized_inverse(const DistSpec& spec, double u, const InverseOptions& opts = {}) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("generalized_inverse: u must lie in (0, 1)");
    if (spec.quantile) return spec.quantile(u);
    return detail::infimum_where([&](double x) { return cdf_at(spec, x) >= u; }, opts);
}

/// F^{-1}(1 - s) for s in (0, 1), without forming 1 - s when a survival
/// handle is available.
inline double upper_quantile(const DistSpec& spec, double s, const InverseOptions& opts = {}) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("upper_quantile: s must lie in (0, 1)");
    if (spec.upper_quantile) return spec.upper_quantile(s);
    if (spec.sf) return detail::infimum_where([&](double x) { return survival(spec, x) <= s; }, opts);
    return generalized_inverse(spec, 1.0 - s, opts);
}

/// uep - F^{-1}(1 - s); requires a finite upper endpoint.
inline double upper_gap(const DistSpec& spec, double s) {
    if (!std::isfinite(spec.uep)) throw EndpointError("upper_gap: distribution has no finite upper endpoint");
    if (spec.upper_gap) return spec.upper_gap(s);
    return spec.uep - upper_quantile(spec, s);
}

/// F'(x): the density handle, or a central difference of the survival function.
inline double density_at(const DistSpec& spec, double x) {
    if (spec.density) return spec.density(x);
    const double h = std::max(1e-6, 1e-6 * std::abs(x));
    const double d = (survival(spec, x - h) - survival(spec, x + h)) / (2.0 * h);
    if (!std::isfinite(d)) throw MissingDensity("density unavailable for " + spec.label);
    return d;
}

/// F''(x): the handle, or a second central difference of the survival function.
inline double density_derivative_at(const DistSpec& spec, double x) {
    if (spec.density_derivative) return spec.density_derivative(x);
    const double h = std::max(1e-6, 1e-6 * std::abs(x));
    const double d = -(survival(spec, x + h) - 2.0 * survival(spec, x) + survival(spec, x - h)) / (h * h);
    if (!std::isfinite(d)) throw MissingDensity("density derivative unavailable for " + spec.label);
    return d;
}

// ---------------------------------------------------------------------------
// Built-in families

inline DistSpec make_exponential() {
    DistSpec d;
    d.cdf = [](double x) { return x < 0.0 ? 0.0 : -std::expm1(-x); };
    d.sf = [](double x) { return x < 0.0 ? 1.0 : std::exp(-x); };
    d.quantile = [](double u) { return -std::log1p(-u); };
    d.upper_quantile = [](double s) { return -std::log(s); };
    d.density = [](double x) { return x < 0.0 ? 0.0 : std::exp(-x); };
    d.density_derivative = [](double x) { return x < 0.0 ? 0.0 : -std::exp(-x); };
    d.lep = 0.0;
    d.uep = kInf;
    d.label = "exp";
    return d;
}

/// F(x) = (1 - x^{-alpha}) on x >= 1.
inline DistSpec make_pareto(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidParameter("pareto: alpha must be positive");
    DistSpec d;
    d.cdf = [alpha](double x) { return x < 1.0 ? 0.0 : -std::expm1(-alpha * std::log(x)); };
    d.sf = [alpha](double x) { return x < 1.0 ? 1.0 : std::exp(-alpha * std::log(x)); };
    d.quantile = [alpha](double u) { return std::exp(-std::log1p(-u) / alpha); };
    d.upper_quantile = [alpha](double s) { return std::exp(-std::log(s) / alpha); };
    d.density = [alpha](double x) { return x < 1.0 ? 0.0 : alpha * std::exp(-(alpha + 1.0) * std::log(x)); };
    d.density_derivative = [alpha](double x) {
        return x < 1.0 ? 0.0 : -alpha * (alpha + 1.0) * std::exp(-(alpha + 2.0) * std::log(x));
    };
    d.lep = 1.0;
    d.uep = kInf;
    d.label = "pareto:" + std::to_string(alpha);
    return d;
}

inline DistSpec make_uniform01() {
    DistSpec d;
    d.cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
    d.sf = [](double x) { return std::clamp(1.0 - x, 0.0, 1.0); };
    d.quantile = [](double u) { return u; };
    d.upper_quantile = [](double s) { return 1.0 - s; };
    d.upper_gap = [](double s) { return s; };
    d.density = [](double x) { return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0; };
    d.density_derivative = [](double) { return 0.0; };
    d.lep = 0.0;
    d.uep = 1.0;
    d.label = "uniform";
    return d;
}

inline DistSpec make_std_normal() {
    DistSpec d;
    d.cdf = normal_cdf;
    d.sf = normal_sf;
    d.quantile = normal_quantile;
    d.upper_quantile = normal_upper_quantile;
    d.density = normal_pdf;
    d.density_derivative = [](double x) { return -x * normal_pdf(x); };
    d.label = "normal";
    return d;
}

inline DistSpec make_gev(const GevParams& p) {
    p.validate();
    DistSpec d;
    d.cdf = [p](double x) { return gev_cdf(p, x); };
    d.sf = [p](double x) { return gev_sf(p, x); };
    d.quantile = [p](double u) { return gev_quantile(p, u); };
    d.upper_quantile = [p](double s) { return gev_upper_quantile(p, s); };
    d.density = [p](double x) { return gev_pdf(p, x); };
    d.density_derivative = [p](double x) { return gev_pdf_derivative(p, x); };
    if (p.gamma < 0.0) {
        // uep - G^{-1}(1 - s) = scale * w^{-gamma} / (-gamma), w = -log(1 - s).
        d.upper_gap = [p](double s) { return p.scale * std::exp(-p.gamma * std::log(-std::log1p(-s))) / -p.gamma; };
    }
    d.lep = p.lower_endpoint();
    d.uep = p.upper_endpoint();
    d.label = "gev:" + std::to_string(p.gamma) + "," + std::to_string(p.loc) + "," + std::to_string(p.scale);
    return d;
}

enum class Family { exponential, pareto, uniform01, std_normal, gev };

/// Builds a family from its parameter list: pareto takes {alpha}, gev takes
/// {gamma, loc, scale}, the others take none.
inline DistSpec make_builtin(Family family, std::span<const double> params = {}) {
    auto expect = [&](std::size_t count, const char* name) {
        if (params.size() != count)
            throw InvalidParameter(std::string(name) + " expects " + std::to_string(count) + " parameter(s)");
    };
    switch (family) {
        case Family::exponential: expect(0, "exp"); return make_exponential();
        case Family::pareto: expect(1, "pareto"); return make_pareto(params[0]);
        case Family::uniform01: expect(0, "uniform"); return make_uniform01();
        case Family::std_normal: expect(0, "normal"); return make_std_normal();
        case Family::gev: expect(3, "gev"); return make_gev({params[0], params[1], params[2]});
    }
    throw InvalidParameter("unknown family");
}

/// Parses the distribution mini-language:
///   exp | pareto:<alpha> | uniform | normal | gev:<gamma>,<loc>,<scale>
inline DistSpec parse_dist(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    std::vector<double> params;
    if (colon != std::string_view::npos) {
        std::string_view rest = text.substr(colon + 1);
        while (true) {
            const auto comma = rest.find(',');
            const std::string_view token = rest.substr(0, comma);
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
            if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value))
                throw InvalidParameter("malformed parameter '" + std::string(token) + "' in '" + std::string(text) + "'");
            params.push_back(value);
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
    }
    DistSpec spec;
    if (name == "exp") spec = make_builtin(Family::exponential, params);
    else if (name == "pareto") spec = make_builtin(Family::pareto, params);
    else if (name == "uniform") spec = make_builtin(Family::uniform01, params);
    else if (name == "normal") spec = make_builtin(Family::std_normal, params);
    else if (name == "gev") spec = make_builtin(Family::gev, params);
    else throw InvalidParameter("unknown distribution '" + std::string(name) + "'");
    spec.label = std::string(text);
    return spec;
}

/// G(y) = F(e^y), the law of log X for a positive X.
inline DistSpec log_transform(const DistSpec& spec) {
    if (!(spec.lep >= 0.0)) throw DomainError("log_transform: requires lep(F) >= 0 (positive random variable)");
    DistSpec g;
    g.cdf = [f = spec](double y) { return cdf_at(f, std::exp(y)); };
    g.sf = [f = spec](double y) { return survival(f, std::exp(y)); };
    g.quantile = [f = spec](double u) { return std::log(generalized_inverse(f, u)); };
    g.upper_quantile = [f = spec](double s) { return std::log(upper_quantile(f, s)); };
    if (spec.density) {
        g.density = [f = spec](double y) {
            const double x = std::exp(y);
            return std::isfinite(x) ? f.density(x) * x : 0.0;
        };
    }
    if (spec.density && spec.density_derivative) {
        g.density_derivative = [f = spec](double y) {
            const double x = std::exp(y);
            return std::isfinite(x) ? f.density_derivative(x) * x * x + f.density(x) * x : 0.0;
        };
    }
    if (std::isfinite(spec.uep)) {
        g.upper_gap = [f = spec](double s) { return -std::log1p(-upper_gap(f, s) / f.uep); };
    }
    g.lep = spec.lep > 0.0 ? std::log(spec.lep) : -kInf;
    g.uep = std::log(spec.uep);
    g.label = "log(" + spec.label + ")";
    return g;
}

struct SampleBatch {
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::string spec_label;
};

/// n i.i.d. draws F^{-1}(1 - U_j) from stream (seed, 0).
inline SampleBatch sample_iid(const DistSpec& spec, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw InvalidParameter("sample_iid: n must be at least 1");
    SampleBatch batch{{}, seed, spec.label};
    batch.values.reserve(n);
    UniformStream stream(seed, 0);
    for (std::size_t j = 0; j < n; ++j) batch.values.push_back(upper_quantile(spec, stream.next()));
    return batch;
}

}  // namespace evt
