#pragma once

// Domain-of-attraction machinery: asymptotic tail moments R and W, the von
// Mises ratios, Gamma-variation probes, tail regular-variation indices,
// normalizing sequences and the aggregate classifier.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evt/dist.hpp"
#include "evt/error.hpp"
#include "evt/gaussian.hpp"
#include "evt/limits.hpp"
#include "evt/norming.hpp"
#include "evt/quadrature.hpp"
#include "evt/regvar.hpp"

namespace evt {

/// Relative tolerance used to call an endpoint limit stabilized and to match
/// a diagnostic against its target value.
inline constexpr double kLimitTolerance = 0.02;

// ---------------------------------------------------------------------------
// Endpoint-approach grids

/// Abscissae approaching uep(F).
///
/// Infinite uep: x = F^{-1}(1 - 10^{-k}) for k = 1 ... 256 on a roughly
/// geometric ladder, i.e. survival levels down to 1e-256. Finite uep:
/// x = uep - 10^{-k} (uep - median), k = 1 ... 12.
inline std::vector<double> endpoint_grid(const DistSpec& spec) {
    std::vector<double> grid;
    if (std::isfinite(spec.uep)) {
        const double span = spec.uep - generalized_inverse(spec, 0.5);
        for (int k = 1; k <= 12; ++k) {
            const double x = spec.uep - span * std::pow(10.0, -k);
            if (x < spec.uep) grid.push_back(x);
        }
    } else {
        for (int k : {1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256}) {
            const double x = upper_quantile(spec, std::pow(10.0, -k));
            if (std::isfinite(x)) grid.push_back(x);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

/// endpoint_grid restricted, for a finite uep, to gaps uep - x of at least
/// 1e-7 max(1, |uep|); closer in, rounding of x swamps the tail integrals.
inline std::vector<double> moment_grid(const DistSpec& spec) {
    auto grid = endpoint_grid(spec);
    if (std::isfinite(spec.uep)) {
        const double min_gap = 1e-7 * std::max(1.0, std::abs(spec.uep));
        std::erase_if(grid, [&](double x) { return spec.uep - x < min_gap; });
    }
    return grid;
}

// ---------------------------------------------------------------------------
// Asymptotic moments

namespace detail {

// Natural length scale of the tail beyond x: 1/hazard when available.
inline double tail_scale(const DistSpec& spec, double x, double sx) {
    if (spec.density) {
        const double f = spec.density(x);
        if (f > 0.0 && std::isfinite(f)) {
            const double h = sx / f;
            if (h > 0.0 && std::isfinite(h)) return h;
        }
    }
    return std::max(1.0, std::abs(x));
}

// int_x^uep g(t) dt for a tail integrand g.
template <class G>
double tail_integral(const DistSpec& spec, double x, double sx, G&& g, const QuadratureOptions& opts) {
    if (std::isfinite(spec.uep)) {
        const double len = spec.uep - x;
        // Abscissae x + len v are resolved only to ulp(uep), which bounds the
        // attainable relative accuracy when x sits close to the endpoint.
        const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(x), std::abs(spec.uep)) / len;
        QuadratureOptions local = opts;
        local.rel_tol = std::max(opts.rel_tol, noise);
        local.abs_tol = std::max(opts.abs_tol, noise);
        return len * integrate([&](double v) { return g(x + len * v); }, 0.0, 1.0, local);
    }
    return integrate_upper_tail(g, x, tail_scale(spec, x, sx), opts);
}

inline double checked_survival(const DistSpec& spec, double x) {
    if (!(x < spec.uep)) throw DomainError("asymptotic moments require x < uep");
    const double sx = survival(spec, x);
    if (!(sx > 0.0)) throw DomainError("asymptotic moments require 1 - F(x) > 0");
    return sx;
}

}  // namespace detail

/// R(F, x) = (1 - F(x))^{-1} int_x^uep (1 - F(t)) dt.
inline double asymptotic_R(const DistSpec& spec, double x, const QuadratureOptions& opts = {}) {
    const double sx = detail::checked_survival(spec, x);
    return detail::tail_integral(spec, x, sx, [&](double t) { return survival(spec, t) / sx; }, opts);
}

/// W(F, x) = (1 - F(x))^{-1} int_x^uep int_u^uep (1 - F(t)) dt du.
///
/// Nested quadrature with the inner tail integral memoized on the outer nodes.
/// Both levels are scaled by 1 - F(x) and their absolute tolerances by R(F, x),
/// so inner integrals deep in the tail only need absolute accuracy.
inline double asymptotic_W(const DistSpec& spec, double x, const QuadratureOptions& opts = {}) {
    const double sx = detail::checked_survival(spec, x);
    const double rx = asymptotic_R(spec, x, opts);
    QuadratureOptions inner_opts = opts;
    inner_opts.abs_tol = 1e-2 * opts.abs_tol * rx;
    inner_opts.rel_tol = 1e-2 * opts.rel_tol;
    QuadratureOptions outer_opts = opts;
    outer_opts.abs_tol = opts.abs_tol * rx;

    std::map<double, double> memo;
    auto inner = [&](double u) {
        if (auto it = memo.find(u); it != memo.end()) return it->second;
        const double su = survival(spec, u);
        // Nodes this deep in the tail contribute nothing at the working tolerance.
        double v = 0.0;
        if (su > 1e-30 * sx && u < spec.uep)
            v = detail::tail_integral(spec, u, su, [&](double t) { return survival(spec, t) / sx; }, inner_opts);
        memo.emplace(u, v);
        return v;
    };
    return detail::tail_integral(spec, x, sx, inner, outer_opts);
}

struct AsymptoticMoments {
    double x = 0.0;
    double R = 0.0;
    double W = 0.0;
    double ratio = 0.0;  // W / R^2
};

inline AsymptoticMoments asymptotic_moments(const DistSpec& spec, double x, const QuadratureOptions& opts = {}) {
    AsymptoticMoments m;
    m.x = x;
    m.R = asymptotic_R(spec, x, opts);
    m.W = asymptotic_W(spec, x, opts);
    m.ratio = m.R > 0.0 ? m.W / (m.R * m.R) : std::numeric_limits<double>::quiet_NaN();
    return m;
}

struct MomentTrace {
    std::vector<AsymptoticMoments> points;
    LimitEstimate limit;  // of W/R^2
};

/// W/R^2 along a grid approaching uep; a limit of 1 characterizes the Gumbel domain.
inline MomentTrace gumbel_moment_ratio(const DistSpec& spec, std::vector<double> x_grid) {
    std::sort(x_grid.begin(), x_grid.end());
    MomentTrace trace;
    std::vector<double> ratios;
    for (double x : x_grid) {
        trace.points.push_back(asymptotic_moments(spec, x));
        ratios.push_back(trace.points.back().ratio);
    }
    trace.limit = stabilized_limit(ratios, kLimitTolerance);
    return trace;
}

// ---------------------------------------------------------------------------
// Von Mises conditions

struct VonMisesDiagnostics {
    Series frechet_ratio;  // x F'(x) / (1 - F(x))             -> alpha
    Series weibull_ratio;  // (uep - x) F'(x) / (1 - F(x))     -> beta
    Series gumbel_q;       // F''(x) (1 - F(x)) / F'(x)^2       -> -1
    Series gumbel_ell;     // F'(x) R(F, x) / (1 - F(x))         -> 1
};

/// Evaluates the four von Mises ratios on endpoint_grid(spec). The Frechet
/// ratio is only sampled for uep = inf and the Weibull ratio for finite uep.
/// q is formed as (F''/F') (S/F') so that F'^2 never underflows.
inline VonMisesDiagnostics von_mises(const DistSpec& spec) {
    VonMisesDiagnostics d;
    const bool finite_uep = std::isfinite(spec.uep);
    for (double x : endpoint_grid(spec)) {
        const double sx = survival(spec, x);
        const double f = density_at(spec, x);
        if (!(sx > 0.0) || !(f >= std::numeric_limits<double>::min())) continue;
        if (finite_uep) d.weibull_ratio.points.emplace_back(x, (spec.uep - x) * f / sx);
        else d.frechet_ratio.points.emplace_back(x, x * f / sx);
        // Skip q where F'' has underflowed into the subnormal range.
        const double f2 = density_derivative_at(spec, x);
        // An exact zero is trusted only where F' itself is far from underflow.
        if (std::abs(f2) >= std::numeric_limits<double>::min() || (f2 == 0.0 && f > 1e-150))
            d.gumbel_q.points.emplace_back(x, (f2 / f) * (sx / f));
        try {
            d.gumbel_ell.points.emplace_back(x, (f / sx) * asymptotic_R(spec, x));
        } catch (const ComputationError&) {
            // R(F, x) infinite: no ell value at this point.
        }
    }
    d.frechet_ratio.finish(kLimitTolerance);
    d.weibull_ratio.finish(kLimitTolerance);
    d.gumbel_q.finish(kLimitTolerance);
    d.gumbel_ell.finish(kLimitTolerance);
    return d;
}

// ---------------------------------------------------------------------------
// Gamma variation

struct GammaProbe {
    double t = 0.0;
    double value = 0.0;
    bool pre_asymptotic = false;  // R(F,t) x + t fell beyond uep; value forced to 0
};

/// Gamma(F, x, R(F, t), t) = (1 - F(R(F, t) x + t)) / (1 - F(t)) with the
/// auxiliary functions alpha(t) = R(F, t), beta(t) = t. Tends to e^{-x}
/// for F in the Gumbel domain.
inline std::vector<GammaProbe> gamma_variation_probe(const DistSpec& spec, double x, std::vector<double> t_grid) {
    std::sort(t_grid.begin(), t_grid.end());
    std::vector<GammaProbe> out;
    for (double t : t_grid) {
        const double st = detail::checked_survival(spec, t);
        const double y = asymptotic_R(spec, t) * x + t;
        if (!(y < spec.uep)) {
            out.push_back({t, 0.0, true});
            continue;
        }
        out.push_back({t, survival(spec, y) / st, false});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tail regular variation

/// Regular-variation index of the tail: of 1 - F when uep = inf, of
/// x -> 1 - F(uep - 1/x) when uep is finite. Probes whose multiplied
/// abscissa has survival below 1e-300 are dropped.
inline RvFit tail_rv_index(const DistSpec& spec) {
    RvProbe probe;
    const double max_mult = *std::max_element(probe.multipliers.begin(), probe.multipliers.end());
    if (std::isfinite(spec.uep)) {
        const double uep = spec.uep;
        probe.fn = [spec, uep](double x) { return survival(spec, uep - 1.0 / x); };
        for (double x : endpoint_grid(spec)) {
            const double y = 1.0 / (uep - x);
            if (probe.fn(max_mult * y) > 1e-300) probe.x_grid.push_back(y);
        }
    } else {
        probe.fn = [spec](double x) { return survival(spec, x); };
        for (double x : endpoint_grid(spec)) {
            if (x > 0.0 && survival(spec, max_mult * x) > 1e-300) probe.x_grid.push_back(x);
        }
    }
    if (probe.x_grid.empty()) {
        RvFit none;
        none.rho_est = std::numeric_limits<double>::quiet_NaN();
        none.dispersion = std::numeric_limits<double>::infinity();
        return none;
    }
    return rv_index(probe, kLimitTolerance);
}

// ---------------------------------------------------------------------------
// Normalizing sequences

/// (a_n, b_n) with (M_n - b_n)/a_n converging to G_gamma:
///   gamma > 0: (F^{-1}(1 - 1/n), 0)
///   gamma < 0: (uep - F^{-1}(1 - 1/n), uep)
///   gamma = 0: (F^{-1}(1 - 1/(ne)) - F^{-1}(1 - 1/n), F^{-1}(1 - 1/n))
inline NormingPair norming_sequence(const DistSpec& spec, double gamma, std::size_t n) {
    if (n < 2) throw InvalidParameter("norming_sequence: n must be at least 2");
    const double s = 1.0 / static_cast<double>(n);
    NormingPair p{1.0, 0.0, n};
    if (gamma > 0.0) {
        p.a = upper_quantile(spec, s);
        p.b = 0.0;
    } else if (gamma < 0.0) {
        if (!std::isfinite(spec.uep)) throw EndpointError("norming_sequence: gamma < 0 needs a finite upper endpoint");
        p.a = upper_gap(spec, s);
        p.b = spec.uep;
    } else {
        const double q = upper_quantile(spec, s);
        p.a = upper_quantile(spec, s / std::numbers::e) - q;
        p.b = q;
    }
    if (!(p.a > 0.0) || !std::isfinite(p.a) || !std::isfinite(p.b))
        throw ComputationError("norming_sequence: degenerate norming for " + spec.label);
    return p;
}

struct GaussianNorming {
    NormingPair expansion;  // a_n = (2 log n)^{-1/2}, b_n from the quantile expansion
    NormingPair exact;      // built from the exact normal quantile
};

/// Normings for the standard normal. The closed form uses
/// b_n = (2 log n)^{1/2} - (log 4pi + log log n) / (2 (2 log n)^{1/2}).
inline GaussianNorming gaussian_norming(std::size_t n) {
    if (n < 3) throw InvalidParameter("gaussian_norming: n must be at least 3");
    const double log_n = std::log(static_cast<double>(n));
    const double root = std::sqrt(2.0 * log_n);
    GaussianNorming g;
    g.expansion = {1.0 / root, root - (std::log(4.0 * std::numbers::pi) + std::log(log_n)) / (2.0 * root), n};
    const double s = 1.0 / static_cast<double>(n);
    const double q = normal_upper_quantile(s);
    g.exact = {normal_upper_quantile(s / std::numbers::e) - q, q, n};
    return g;
}

/// R(log x, G) for G the law of log X along x_grid (endpoint_grid(spec) when
/// empty). The limit estimates gamma for the Frechet domain and is 0 for the
/// Gumbel domain.
inline Series gamma_from_log_moment(const DistSpec& spec, std::vector<double> x_grid = {}) {
    const DistSpec g = log_transform(spec);
    if (x_grid.empty()) x_grid = endpoint_grid(spec);
    std::sort(x_grid.begin(), x_grid.end());
    Series out;
    for (double x : x_grid) {
        if (!(x > 0.0)) continue;
        const double y = std::log(x);
        if (!(survival(g, y) > 0.0)) continue;
        out.points.emplace_back(x, asymptotic_R(g, y));
    }
    out.finish(kLimitTolerance);
    return out;
}

// ---------------------------------------------------------------------------
// Classification

enum class DomainKind { frechet, weibull, gumbel, undetermined };

inline const char* to_string(DomainKind k) {
    switch (k) {
        case DomainKind::frechet: return "frechet";
        case DomainKind::weibull: return "weibull";
        case DomainKind::gumbel: return "gumbel";
        case DomainKind::undetermined: return "undetermined";
    }
    return "?";
}

struct DomainVerdict {
    DomainKind kind = DomainKind::undetermined;
    std::optional<double> gamma;  // GEV shape
    std::optional<double> index;  // alpha (Frechet) or beta (Weibull)
    VonMisesDiagnostics von_mises;
    MomentTrace moments;
    RvFit tail_rv;
    std::string confidence_notes;
};

/// Decides the extreme value domain of F:
///  1. finite uep, tail RV index -beta < 0 on the endpoint transform and the
///     Weibull ratio -> beta: Weibull(beta);
///  2. infinite uep, tail RV index -alpha < 0 and the Frechet ratio -> alpha:
///     Frechet(alpha);
///  3. otherwise q -> -1 or W/R^2 -> 1: Gumbel;
///  4. otherwise undetermined.
/// When an RV verdict and a Gumbel signal coexist, the RV verdict stands only
/// if the multiplier dispersion is below 0.01.
inline DomainVerdict classify(const DistSpec& spec) {
    DomainVerdict v;
    std::string notes;
    auto note = [&](const std::string& s) {
        if (!notes.empty()) notes += "; ";
        notes += s;
    };

    try {
        v.von_mises = von_mises(spec);
    } catch (const Error& e) {
        note(std::string("von Mises diagnostics unavailable: ") + e.what());
    }
    try {
        v.tail_rv = tail_rv_index(spec);
    } catch (const Error& e) {
        v.tail_rv.rho_est = std::numeric_limits<double>::quiet_NaN();
        note(std::string("tail RV index unavailable: ") + e.what());
    }
    try {
        v.moments = gumbel_moment_ratio(spec, moment_grid(spec));
    } catch (const Error& e) {
        v.moments = {};
        note(std::string("moment ratio unavailable: ") + e.what());
    }

    auto near = [](double value, double target) {
        return std::abs(value - target) <= kLimitTolerance * std::max(1.0, std::abs(target));
    };

    const double rho = v.tail_rv.rho_est;
    const bool rv_ok = v.tail_rv.stabilized && std::isfinite(rho) && rho < 0.0 &&
                       v.tail_rv.dispersion <= kLimitTolerance * std::max(1.0, std::abs(rho));
    const double index = -rho;
    const Series& ratio = std::isfinite(spec.uep) ? v.von_mises.weibull_ratio : v.von_mises.frechet_ratio;
    const bool corroborated = rv_ok && ratio.limit.stabilized && near(ratio.limit.value, index);

    const bool q_ok = v.von_mises.gumbel_q.limit.stabilized && near(v.von_mises.gumbel_q.limit.value, -1.0);
    const bool moment_ok = v.moments.limit.stabilized && near(v.moments.limit.value, 1.0);
    const bool gumbel_ok = q_ok || moment_ok;

    if (rv_ok && !corroborated) note("tail RV index not corroborated by the von Mises ratio");
    if (corroborated && gumbel_ok && v.tail_rv.dispersion >= 0.01) {
        note("RV index and Gumbel criteria both stabilize; RV dispersion too large to break the tie");
    } else if (corroborated) {
        v.index = index;
        if (std::isfinite(spec.uep)) {
            v.kind = DomainKind::weibull;
            v.gamma = -1.0 / index;
        } else {
            v.kind = DomainKind::frechet;
            v.gamma = 1.0 / index;
        }
    } else if (gumbel_ok) {
        v.kind = DomainKind::gumbel;
        v.gamma = 0.0;
        note(q_ok && moment_ok ? "q and moment-ratio criteria agree" : (q_ok ? "q criterion" : "moment-ratio criterion"));
    } else {
        note("no criterion stabilized at its target");
    }
    v.confidence_notes = notes;
    return v;
}

}  // namespace evt
